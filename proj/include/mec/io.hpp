#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mec/distribution.hpp"
#include "mec/errors.hpp"
#include "mec/instance.hpp"
#include "mec/numeric.hpp"

namespace mec {

// Parsed instance file, prior to committing to a numeric mode. Entries are
// kept in both representations: decimals are snapped to small-denominator
// rationals (0.1 -> 1/10), "a/b" strings are exact and force exact mode.
struct instance_document {
    numeric_mode mode = numeric_mode::float64;
    bool explicit_mode = false;
    bool renormalize = false;
    std::vector<std::vector<double>> float_values;
    std::vector<std::vector<rational>> exact_values;

    basic_instance<double> as_float(tolerances tol = {}) const {
        std::vector<basic_distribution<double>> marginals;
        marginals.reserve(float_values.size());
        for (const auto& row : float_values)
            marginals.push_back(
                basic_distribution<double>::from_masses(row, renormalize, tol));
        return basic_instance<double>::from_marginals(std::move(marginals));
    }

    basic_instance<rational> as_exact(tolerances tol = {}) const {
        std::vector<basic_distribution<rational>> marginals;
        marginals.reserve(exact_values.size());
        for (const auto& row : exact_values)
            marginals.push_back(
                basic_distribution<rational>::from_masses(row, renormalize, tol));
        return basic_instance<rational>::from_marginals(std::move(marginals));
    }
};

namespace detail {

inline rational parse_fraction(const std::string& text, const std::string& where) {
    auto slash = text.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 >= text.size())
        throw parse_error("instance file: " + where + ": expected \"a/b\", got \"" + text +
                          "\"");
    bigint num, den;
    try {
        num = bigint(text.substr(0, slash));
        den = bigint(text.substr(slash + 1));
    } catch (const std::runtime_error&) {
        throw parse_error("instance file: " + where + ": malformed fraction \"" + text + "\"");
    }
    if (den == 0) throw parse_error("instance file: " + where + ": zero denominator");
    return rational(num, den);
}

}  // namespace detail

inline instance_document parse_instance_document(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("instance file: ") + e.what());
    }
    if (!doc.is_object()) throw parse_error("instance file: top level must be an object");
    if (!doc.contains("distributions"))
        throw parse_error("instance file: missing \"distributions\"");
    const auto& rows = doc["distributions"];
    if (!rows.is_array() || rows.empty())
        throw parse_error("instance file: \"distributions\" must be a non-empty array");

    instance_document out;
    bool saw_fraction = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        std::string row_loc = "distributions[" + std::to_string(i) + "]";
        if (!row.is_array() || row.empty())
            throw parse_error("instance file: " + row_loc + " must be a non-empty array");
        std::vector<double> fv;
        std::vector<rational> ev;
        for (std::size_t k = 0; k < row.size(); ++k) {
            const auto& v = row[k];
            std::string loc = row_loc + "[" + std::to_string(k) + "]";
            if (v.is_number()) {
                double x = v.get<double>();
                fv.push_back(x);
                ev.push_back(rationalize(x));
            } else if (v.is_string()) {
                rational r = detail::parse_fraction(v.get<std::string>(), loc);
                saw_fraction = true;
                ev.push_back(r);
                fv.push_back(numeric_traits<rational>::to_double(r));
            } else {
                throw parse_error("instance file: " + loc +
                                  " must be a number or an \"a/b\" string");
            }
        }
        out.float_values.push_back(std::move(fv));
        out.exact_values.push_back(std::move(ev));
    }

    if (doc.contains("numeric_mode")) {
        if (!doc["numeric_mode"].is_string())
            throw parse_error("instance file: numeric_mode must be a string");
        std::string s = doc["numeric_mode"].get<std::string>();
        out.explicit_mode = true;
        if (s == "float64")
            out.mode = numeric_mode::float64;
        else if (s == "exact-rational")
            out.mode = numeric_mode::exact_rational;
        else
            throw parse_error("instance file: numeric_mode must be \"float64\" or "
                              "\"exact-rational\", got \"" + s + "\"");
    }
    if (saw_fraction) {
        if (out.explicit_mode && out.mode == numeric_mode::float64)
            throw parse_error(
                "instance file: rational \"a/b\" entries force exact-rational mode, "
                "which conflicts with numeric_mode \"float64\"");
        out.mode = numeric_mode::exact_rational;
    }
    if (doc.contains("renormalize")) {
        if (!doc["renormalize"].is_boolean())
            throw parse_error("instance file: renormalize must be a boolean");
        out.renormalize = doc["renormalize"].get<bool>();
    }
    return out;
}

inline instance_document load_instance_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("instance file: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance_document(buf.str());
}

inline nlohmann::json to_json(const basic_distribution<double>& d) {
    return nlohmann::json(d.probs());
}

inline nlohmann::json to_json(const basic_distribution<rational>& d) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : d.probs()) arr.push_back(to_string(v));
    return arr;
}

}  // namespace mec
