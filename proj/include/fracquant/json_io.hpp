#pragma once

// JSON serialization of the exact types.  Keys are emitted in insertion order
// so identical invocations produce byte-identical output.

#include "fracquant/asymptotics.hpp"
#include "fracquant/oracle.hpp"

#include <json.hpp>

#include <string>

namespace fracquant {

using Json = nlohmann::ordered_json;

inline Json scalar_json(const Scalar& x, int digits = 12) {
    Json j;
    if (x.is_rational()) {
        j["num"] = x.num().str();
        j["den"] = x.den().str();
    } else {
        const BigRat& a = x.rat_part();
        const BigRat& b = x.sqrt6_coeff();
        j["a"] = Json{{"num", boost::multiprecision::numerator(a).str()},
                      {"den", boost::multiprecision::denominator(a).str()}};
        j["b"] = Json{{"num", boost::multiprecision::numerator(b).str()},
                      {"den", boost::multiprecision::denominator(b).str()}};
        j["surd"] = 6;
    }
    j["decimal"] = x.to_decimal(digits);
    return j;
}

inline Json address_json(const Address& a) {
    Json j;
    j["s"] = a.s_word;
    j["t"] = a.t_word;
    switch (a.anchor) {
        case Anchor::Half: j["anchor"] = "half"; break;
        case Anchor::TwoLeft: j["anchor"] = "two_left"; break;
        case Anchor::TwoRight: j["anchor"] = "two_right"; break;
        case Anchor::Explicit: j["anchor"] = Json{{"explicit", scalar_json(a.explicit_value)}}; break;
    }
    return j;
}

inline Json report_json(const DistortionReport& rep) {
    Json j;
    j["value"] = scalar_json(rep.value);
    j["truncation_bound"] = scalar_json(rep.truncation_bound);
    j["exact"] = rep.exact;
    Json pts = Json::array();
    for (const auto& c : rep.per_point) pts.push_back(scalar_json(c));
    j["per_point"] = pts;
    j["depth"] = rep.max_depth_used;
    return j;
}

inline Json family_json(const CondensationSystem& sys, const Family& f, const std::string& label) {
    Json j;
    j["label"] = label;
    j["cardinality"] = f.cardinality().str();
    j["per_element_error"] = scalar_json(f.per_element_error(sys));
    if (f.tied_with_next) j["tied_with_next"] = true;
    return j;
}

inline Json verify_json(const VerifyReport& rep) {
    Json j;
    j["dp_cost"] = rep.dp_cost;
    j["exact_error"] = rep.exact_error;
    j["diff"] = rep.diff;
    j["bound"] = rep.bound;
    j["pass"] = rep.pass;
    j["centroid_dev"] = rep.centroid_dev;
    if (rep.dp_improves) j["dp_improves"] = true;
    return j;
}

}  // namespace fracquant
