#include "spectra/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "spectra/error.hpp"

namespace spectra {

namespace {

GaussRule rule_from_section(const TridiagonalSym& t, double vnorm_sq) {
    const EigenPairsSym eig = tridiag_eig(t);
    GaussRule rule;
    rule.vnorm_sq = vnorm_sq;
    rule.nodes = eig.values;
    rule.weights.resize(eig.values.size());
    for (std::size_t i = 0; i < eig.values.size(); ++i) {
        const double z1 = eig.vectors(0, i);
        rule.weights[i] = vnorm_sq * z1 * z1;
    }
    return rule;
}

void require_steps(std::size_t steps, const char* who) {
    if (steps == 0) {
        throw ContractViolation(std::string(who) + ": decomposition has no completed steps");
    }
}

}  // namespace

GaussRule gauss_rule(const LanczosDecomposition& dec) {
    require_steps(dec.steps_completed, "gauss_rule");
    return rule_from_section(dec.section(), dec.vnorm * dec.vnorm);
}

TridiagonalSym ga_extended_section(const LanczosDecomposition& dec) {
    const std::size_t k = dec.steps_completed;
    require_steps(k, "ga_rule");
    const Vector& a = dec.alphas;
    const Vector& b = dec.betas;  // b[i] holds beta_{i+2}
    TridiagonalSym t;
    t.diag.reserve(2 * k - 1);
    t.offdiag.reserve(2 * k - 2);
    // diag: alpha_1..alpha_k, alpha_{k-1}..alpha_1
    for (std::size_t i = 0; i < k; ++i) {
        t.diag.push_back(a[i]);
    }
    for (std::size_t i = k - 1; i-- > 0;) {
        t.diag.push_back(a[i]);
    }
    if (k > 1) {
        // offdiag: beta_2..beta_k, beta_{k+1}, beta_{k-1}..beta_2
        for (std::size_t i = 0; i + 1 < k; ++i) {
            t.offdiag.push_back(b[i]);
        }
        t.offdiag.push_back(b[k - 1]);
        for (std::size_t i = k - 2; i-- > 0;) {
            t.offdiag.push_back(b[i]);
        }
    }
    return t;
}

GaussRule ga_rule(const LanczosDecomposition& dec) {
    require_steps(dec.steps_completed, "ga_rule");
    if (dec.breakdown || dec.betas.size() < dec.steps_completed) {
        GaussRule rule = gauss_rule(dec);
        rule.fell_back_to_gauss = true;
        return rule;
    }
    return rule_from_section(ga_extended_section(dec), dec.vnorm * dec.vnorm);
}

ArnoldiRule arnoldi_rule(const ArnoldiDecomposition& dec) {
    require_steps(dec.steps_completed, "arnoldi_rule");
    const EigenPairsGeneral eig = hessenberg_eig(dec.section());
    const double vnorm_sq = dec.vnorm * dec.vnorm;
    ArnoldiRule rule;
    const std::size_t k = eig.values.size();
    rule.nodes = eig.values;
    rule.left_factors.resize(k);
    rule.right_factors.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        rule.left_factors[i] = vnorm_sq * eig.vectors(0, i);
        rule.right_factors[i] = eig.inverse_first_column[i];
    }
    return rule;
}

StepValue apply_step_function(const GaussRule& rule, double zero_band) {
    StepValue out;
    double max_node = 0.0;
    for (double x : rule.nodes) {
        max_node = std::max(max_node, std::abs(x));
    }
    const double band = zero_band * max_node;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        if (std::abs(rule.nodes[i]) <= band) {
            out.near_zero_node = true;
        }
        if (rule.nodes[i] < 0.0) {
            out.value += rule.weights[i];
        }
    }
    return out;
}

StepValue apply_step_function(const ArnoldiRule& rule, double zero_band) {
    StepValue out;
    double max_node = 0.0;
    for (const auto& x : rule.nodes) {
        max_node = std::max(max_node, std::abs(x));
    }
    const double band = zero_band * max_node;
    std::complex<double> sum{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        if (std::abs(rule.nodes[i]) <= band) {
            out.near_zero_node = true;
        }
        if (rule.nodes[i].real() < 0.0) {
            sum += rule.left_factors[i] * rule.right_factors[i];
        }
    }
    out.value = sum.real();
    out.imag = sum.imag();
    return out;
}

}  // namespace spectra
