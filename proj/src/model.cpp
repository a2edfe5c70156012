#include "nhqc/model.hpp"

#include <cmath>
#include <string>

namespace nhqc {

namespace {

std::string num(double v) { return std::to_string(v); }

}  // namespace

void validate(const CircuitParams& p) {
    const double fields[] = {p.omega_a,    p.omega_q[0],  p.omega_q[1],
                             p.omega_c,    p.gamma_q[0],  p.gamma_q[1],
                             p.gamma_a,    p.g_xy,        p.g_qc[0],
                             p.g_qc[1],    p.lambda_q[0], p.lambda_q[1],
                             p.theta_q[0], p.theta_q[1],  p.sigma_z[0],
                             p.sigma_z[1]};
    for (double v : fields)
        if (!std::isfinite(v))
            throw InvalidParameter("circuit parameters must all be finite");
    if (!(p.gamma_a > 0.0))
        throw NonPositiveResonatorLoss("gamma_a must be > 0, got " + num(p.gamma_a));
    for (int j = 0; j < 2; ++j) {
        if (p.gamma_q[j] < 0.0)
            throw InvalidParameter("gamma_q" + std::to_string(j + 1) + " must be >= 0");
        if (p.lambda_q[j] < 0.0)
            throw InvalidParameter("lambda_q" + std::to_string(j + 1) +
                                   " must be >= 0 (phase belongs in theta_q)");
        if (!(p.sigma_z[j] >= -1.0 && p.sigma_z[j] <= 1.0))
            throw InvalidParameter("sigma_z" + std::to_string(j + 1) + " must lie in [-1, 1]");
        if (p.omega_q[j] == p.omega_c)
            throw DegenerateDetuning("omega_q" + std::to_string(j + 1) +
                                     " coincides with omega_c = " + num(p.omega_c) +
                                     "; the coupler-mediated shift divides by this detuning");
    }
}

Matrix2c build_h_non(const EffectiveModel& m) {
    Matrix2c h;
    h(0, 0) = 0.5 * complex(m.delta_prime[0], -m.big_gamma[0]);
    h(1, 1) = 0.5 * complex(m.delta_prime[1], -m.big_gamma[1]);
    h(0, 1) = complex(m.g_e, 0.0) -
              complex(0.0, m.omega_n) * std::exp(complex(0.0, m.delta_theta));
    h(1, 0) = complex(m.g_e, 0.0) -
              complex(0.0, m.omega_n) * std::exp(complex(0.0, -m.delta_theta));
    return h;
}

EffectiveModel derive_effective_model(const CircuitParams& p) {
    validate(p);
    EffectiveModel m;
    for (int j = 0; j < 2; ++j) {
        const double d_ja = p.omega_q[j] - p.omega_a;
        const double d_jc = p.omega_q[j] - p.omega_c;
        m.delta_prime[j] = d_ja + p.g_qc[j] * p.g_qc[j] / d_jc;
        m.big_gamma[j] =
            p.gamma_q[j] + p.lambda_q[j] * p.lambda_q[j] * p.sigma_z[j] / p.gamma_a;
    }
    // 2 / delta_e = 1 / d_1c + 1 / d_2c (harmonic-mean coupler detuning).
    const double d1c = p.omega_q[0] - p.omega_c;
    const double d2c = p.omega_q[1] - p.omega_c;
    const double delta_e = 2.0 / (1.0 / d1c + 1.0 / d2c);
    m.g_e = p.g_xy + p.g_qc[0] * p.g_qc[1] / delta_e;
    m.omega_n = p.lambda_q[0] * p.lambda_q[1] / p.gamma_a;
    m.delta_theta = p.theta_q[0] - p.theta_q[1];
    m.h_non = build_h_non(m);
    return m;
}

EffectiveModel with_coherent_coupling(EffectiveModel m, double g_e) {
    m.g_e = g_e;
    m.h_non = build_h_non(m);
    return m;
}

std::vector<double> sweep_ge_via_coupler(const CircuitParams& p,
                                         const std::vector<double>& omega_c_values) {
    std::vector<double> out;
    out.reserve(omega_c_values.size());
    CircuitParams q = p;
    for (double wc : omega_c_values) {
        q.omega_c = wc;
        out.push_back(derive_effective_model(q).g_e);
    }
    return out;
}

DriveCoupling lambda_from_drive(const DriveParams& d) {
    if (d.delta_ja == 0.0)
        throw DegenerateDetuning("drive detuning delta_ja must be nonzero");
    if (d.delta_ja + d.alpha == 0.0)
        throw DegenerateDetuning("delta_ja + alpha must be nonzero");
    DriveCoupling out;
    out.lambda_signed = d.lambda0 * d.alpha * d.omega_drive_amp /
                        (std::sqrt(2.0) * d.delta_ja * (d.delta_ja + d.alpha));
    out.lambda = std::abs(out.lambda_signed);
    out.ratio_ja = std::abs(d.lambda0 / d.delta_ja);
    out.ratio_ja_alpha = std::abs(d.lambda0 / (d.delta_ja + d.alpha));
    out.dispersive_ok =
        out.ratio_ja <= d.dispersive_ratio && out.ratio_ja_alpha <= d.dispersive_ratio;
    return out;
}

}  // namespace nhqc
