// Prints the exact moments and small optimal sets of each variant.

#include "fracquant/construction.hpp"

#include <iostream>

using namespace fracquant;

int main() {
    for (Variant v : {Variant::nu1, Variant::nu2, Variant::nu3, Variant::nu4}) {
        auto sys = CondensationSystem::make(v);
        std::cout << variant_name(v) << ":\n";
        std::cout << "  E(nu) = " << sys.nu.mean.to_string()
                  << "   W = " << sys.nu.w.to_string() << "\n";
        std::cout << "  V(P)  = " << sys.v.to_string() << " = " << sys.v.to_decimal(9) << "\n";
        std::cout << "  two-means: {" << sys.two_left.to_string() << ", "
                  << sys.two_right.to_string() << "}, V_2 = " << sys.v2.to_decimal(9) << "\n";
        auto b = build_alpha_m(sys, 5);
        std::cout << "  V_5 = " << b.error.to_decimal(9) << " with points:";
        for (const auto& p : b.points.points()) std::cout << " " << p.value.to_decimal(6);
        std::cout << "\n\n";
    }
    return 0;
}
