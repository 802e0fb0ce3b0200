#pragma once

// Seeded random candidate structures on the flat C^2 chart, built from a
// tiny polynomial algebra so that closedness (Theta = d alpha + Theta_0) and
// complex type (projection onto the J-invariant part) hold exactly by
// construction.

#include <array>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "kcn/definition.hpp"

namespace kcn::testing {

struct Poly {
    // monomial exponents -> coefficient
    std::map<std::array<int, 4>, double> terms;

    Poly& add(std::array<int, 4> mono, double c) {
        if (c != 0.0) terms[mono] += c;
        return *this;
    }
    Poly derivative(int var) const {
        Poly out;
        for (const auto& [mono, c] : terms) {
            if (mono[var] == 0) continue;
            std::array<int, 4> m = mono;
            m[var] -= 1;
            out.add(m, c * mono[var]);
        }
        return out;
    }
    Poly operator+(const Poly& o) const {
        Poly out = *this;
        for (const auto& [m, c] : o.terms) out.add(m, c);
        return out;
    }
    Poly operator*(double s) const {
        Poly out;
        for (const auto& [m, c] : terms) out.add(m, c * s);
        return out;
    }
    bool empty() const {
        for (const auto& [m, c] : terms)
            if (c != 0.0) return false;
        return true;
    }

    std::string to_string(const std::vector<std::string>& coords) const {
        std::string out;
        for (const auto& [mono, c] : terms) {
            if (c == 0.0) continue;
            if (!out.empty()) out += " + ";
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", c);
            out += "(" + std::string(buf) + ")";
            for (int v = 0; v < 4; ++v) {
                for (int k = 0; k < mono[v]; ++k) out += "*" + coords[v];
            }
        }
        return out.empty() ? "0" : out;
    }
};

inline const std::vector<std::string>& c2_coords() {
    static const std::vector<std::string> coords = {"x1", "y1", "x2", "y2"};
    return coords;
}

inline std::string flat_c2_header(const std::string& name) {
    return "manifold " + name +
           "\n"
           "dim 4\n"
           "coords x1 y1 x2 y2\n"
           "g 1 1 = \"1\"\ng 2 2 = \"1\"\ng 3 3 = \"1\"\ng 4 4 = \"1\"\n"
           "J 2 1 = \"1\"\nJ 1 2 = \"-1\"\nJ 4 3 = \"1\"\nJ 3 4 = \"-1\"\n";
}

inline Poly random_poly(std::mt19937_64& rng, int max_terms, double scale) {
    auto unit = [&rng]() { return 2.0 * double(rng() >> 11) * 0x1.0p-53 - 1.0; };
    Poly p;
    for (int t = 0; t < max_terms; ++t) {
        std::array<int, 4> mono = {0, 0, 0, 0};
        int degree = int(rng() % 3);  // 0, 1 or 2
        for (int d = 0; d < degree; ++d) mono[rng() % 4] += 1;
        p.add(mono, scale * unit());
    }
    return p;
}

/// Theta = d(alpha) + Theta_0 with alpha a random polynomial 1-form of
/// degree <= 2 and Theta_0 a constant 2-form: closed by construction.
inline ChartDefinition random_closed_candidate(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto unit = [&rng]() { return 2.0 * double(rng() >> 11) * 0x1.0p-53 - 1.0; };
    std::array<Poly, 4> alpha;
    for (int j = 0; j < 4; ++j) alpha[j] = random_poly(rng, 4, 1.0);

    std::string text = flat_c2_header("random-closed-" + std::to_string(seed));
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            Poly theta_ij = alpha[j].derivative(i) + alpha[i].derivative(j) * -1.0;
            theta_ij.add({0, 0, 0, 0}, unit());  // constant part
            text += "theta " + std::to_string(i + 1) + " " + std::to_string(j + 1) +
                    " = \"" + theta_ij.to_string(c2_coords()) + "\"\n";
        }
    return load_definition_text(text);
}

/// A c.c., Omega-skew, non-degenerate polynomial candidate: the J-invariant
/// projection of a random 2-form, shifted by a multiple of the base form so
/// that A = Pi Theta is dominated by a multiple of the identity.
inline ChartDefinition random_cc_candidate(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    // Random antisymmetric polynomial 2-form.
    Poly raw[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            raw[i][j] = random_poly(rng, 3, 0.25);
            raw[j][i] = raw[i][j] * -1.0;
        }
    // J-invariant projection: (Theta + Theta(J., J.)) / 2 with the constant
    // block J of the flat chart.
    double J[4][4] = {};
    J[1][0] = 1.0;
    J[0][1] = -1.0;
    J[3][2] = 1.0;
    J[2][3] = -1.0;
    Poly proj[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Poly twisted;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    if (J[a][i] != 0.0 && J[b][j] != 0.0)
                        twisted = twisted + raw[a][b] * (J[a][i] * J[b][j]);
            proj[i][j] = (raw[i][j] + twisted) * 0.5;
        }
    // Shift by -3 Omega, i.e. add +3 Id to A.
    proj[0][1].add({0, 0, 0, 0}, -3.0);
    proj[2][3].add({0, 0, 0, 0}, -3.0);

    std::string text = flat_c2_header("random-cc-" + std::to_string(seed));
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            if (proj[i][j].empty()) continue;
            text += "theta " + std::to_string(i + 1) + " " + std::to_string(j + 1) +
                    " = \"" + proj[i][j].to_string(c2_coords()) + "\"\n";
        }
    return load_definition_text(text);
}

}  // namespace kcn::testing
