// Walks the canonical ladder for one variant and prints the family order,
// the exact errors, and the dimension estimates.

#include "fracquant/asymptotics.hpp"

#include <iostream>

using namespace fracquant;

int main(int argc, char** argv) {
    Variant v = Variant::nu1;
    if (argc > 1) {
        auto parsed = parse_variant(argv[1]);
        if (!parsed) {
            std::cerr << "usage: demo_ladder [nu1|nu2|nu3|nu4]\n";
            return 1;
        }
        v = *parsed;
    }
    auto sys = CondensationSystem::make(v);
    const Regime regime = regime_of(v);

    std::cout << "family order of SF*(6) for " << variant_name(v) << ":\n  ";
    for (const auto& f : family_order(sys, 6))
        std::cout << f.label << (f.tied_with_next ? " = " : " > ");
    std::cout << "end\n\n";

    std::cout << "n, F(n), V_F(n), dim estimate, slope\n";
    for (const auto& row : dimension_table(sys, 16)) {
        std::cout << row.n << ", " << f_of(regime, row.n).str() << ", " << row.v.to_decimal(8)
                  << ", " << row.dim_estimate << ", " << row.dim_slope << "\n";
    }
    std::cout << "\ntarget D(P) = " << d_p(v) << "\n";
    return 0;
}
