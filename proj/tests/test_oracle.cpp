#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "helpers.hpp"
#include "nhqc/oracle.hpp"
#include "nhqc/spectrum.hpp"

using namespace nhqc;
using nhqc::testing::random_params;

TEST_CASE("full-model structure") {
    const CircuitParams p;  // defaults

    SUBCASE("dim-3 carries shifted detunings and the folded coupling") {
        const FullModel fm = build_full_model(p);
        REQUIRE(fm.dim == 3);
        const EffectiveModel em = derive_effective_model(p);
        CHECK(fm.matrix(0, 0) == complex(em.delta_prime[0], -0.5));
        CHECK(fm.matrix(1, 1) == complex(em.delta_prime[1], -0.505));
        CHECK(fm.matrix(2, 2) == complex(0.0, -65.0));
        CHECK(fm.matrix(0, 1) == complex(em.g_e, 0.0));
        CHECK(fm.matrix(0, 2) == complex(11.0, 0.0));  // theta_1 = 0
        CHECK(fm.matrix(2, 0) == std::conj(fm.matrix(0, 2)));
    }
    SUBCASE("dim-4 exposes the coupler with no photon edge") {
        const FullModel fm = build_full_model(p, {.with_coupler = true, .gamma_c = 0.0});
        REQUIRE(fm.dim == 4);
        CHECK(fm.matrix(0, 0) == complex(25.0, -0.5));   // bare detuning
        CHECK(fm.matrix(1, 1) == complex(30.0, -0.505));
        CHECK(fm.matrix(3, 3) == complex(725.0, 0.0));   // omega_c - omega_a
        CHECK(fm.matrix(0, 1) == complex(4.0, 0.0));     // bare g_xy
        CHECK(fm.matrix(0, 3) == complex(30.0, 0.0));
        CHECK(fm.matrix(1, 3) == complex(30.3, 0.0));
        CHECK(fm.matrix(2, 3) == complex(0.0, 0.0));     // no coupler-photon edge
        CHECK(fm.matrix(3, 2) == complex(0.0, 0.0));
    }
    SUBCASE("phases land on the qubit-photon edges with conjugate symmetry") {
        CircuitParams q = p;
        q.theta_q = {0.7, -0.4};
        const FullModel fm = build_full_model(q);
        CHECK(fm.matrix(0, 2) == 11.0 * std::exp(complex(0.0, 0.7)));
        CHECK(fm.matrix(1, 2) == 11.0 * std::exp(complex(0.0, -0.4)));
        CHECK(fm.matrix(2, 0) == std::conj(fm.matrix(0, 2)));
        CHECK(fm.matrix(2, 1) == std::conj(fm.matrix(1, 2)));
    }
}

TEST_CASE("single qubit-photon block matches its closed-form eigenvalues") {
    CircuitParams p;
    p.g_xy = 0.0;
    p.g_qc = {0.0, 0.0};
    p.lambda_q = {11.0, 0.0};  // qubit 2 fully decoupled
    const FullModel fm = build_full_model(p);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(fm.matrix);

    const complex q2 = fm.matrix(1, 1);
    const complex mean = 0.5 * (fm.matrix(0, 0) + fm.matrix(2, 2));
    const complex half = 0.5 * (fm.matrix(0, 0) - fm.matrix(2, 2));
    const complex root = std::sqrt(half * half + 121.0);
    std::vector<complex> want = {q2, mean + root, mean - root};
    std::vector<complex> got = {es.eigenvalues()(0), es.eigenvalues()(1),
                                es.eigenvalues()(2)};
    // set comparison: each expected eigenvalue matched once
    for (const complex& w : want) {
        double best = 1e300;
        for (const complex& g : got) best = std::min(best, std::abs(g - w));
        CHECK(best <= 1e-10 * std::max(1.0, std::abs(w)));
    }
}

TEST_CASE("photon elimination reproduces the effective couplings exactly") {
    std::mt19937_64 rng(501);
    for (int k = 0; k < 10000; ++k) {
        const CircuitParams p = random_params(rng);
        CHECK(offdiag_identity_residual(p) <= 1e-12);
    }
}

TEST_CASE("eliminated diagonal carries the blind Purcell damping") {
    const CircuitParams p;
    const Matrix2c red = adiabatic_elimination(build_full_model(p));
    // gamma_j / 2 + lambda_j^2 / gamma_a, with no sigma_z weighting
    CHECK(-red(0, 0).imag() == doctest::Approx(0.5 + 121.0 / 65.0).epsilon(1e-14));
    CHECK(-red(1, 1).imag() == doctest::Approx(0.505 + 121.0 / 65.0).epsilon(1e-14));
    // the real part of the diagonal is untouched by the zeroth-order pole
    const EffectiveModel em = derive_effective_model(p);
    CHECK(red(0, 0).real() == doctest::Approx(em.delta_prime[0]).epsilon(1e-14));
}

TEST_CASE("nothing to eliminate leaves the qubit block alone") {
    CircuitParams p;
    p.lambda_q = {0.0, 0.0};
    const FullModel fm = build_full_model(p);
    const Matrix2c red = adiabatic_elimination(fm);
    CHECK((red - fm.matrix.topLeftCorner<2, 2>()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("exact Schur complement generalizes the adiabatic elimination") {
    const CircuitParams p;
    const FullModel fm = build_full_model(p);

    SUBCASE("at zero frequency both reductions coincide") {
        const Matrix2c a = adiabatic_elimination(fm);
        const Matrix2c s = exact_schur_elimination(fm, complex(0.0, 0.0));
        CHECK((a - s).cwiseAbs().maxCoeff() <= 1e-14 * a.cwiseAbs().maxCoeff());
    }
    SUBCASE("evaluating the pole near the slow modes beats the static pole") {
        const SlowModes sm = slow_modes(fm);
        const complex full = sm.w[1] - sm.w[0];
        const auto split = [](const Matrix2c& r) {
            const complex tr = r(0, 0) + r(1, 1);
            const complex d = r(0, 0) * r(1, 1) - r(0, 1) * r(1, 0);
            return std::sqrt(tr * tr - 4.0 * d);
        };
        const double err_adiabatic = std::min(
            std::abs(split(adiabatic_elimination(fm)) - full),
            std::abs(split(adiabatic_elimination(fm)) + full));
        const double err_schur =
            std::min(std::abs(split(exact_schur_elimination(fm)) - full),
                     std::abs(split(exact_schur_elimination(fm)) + full));
        CHECK(err_schur < err_adiabatic);
    }
}

TEST_CASE("reduction error shrinks as the photon gets lossier") {
    CircuitParams p;  // defaults: lambda_1 = lambda_2 = 11
    const std::vector<double> schedule = {65.0, 130.0, 260.0, 520.0};
    const auto reports = compare_reduction(p, schedule);
    REQUIRE(reports.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(reports[k].gamma_a == schedule[k]);
        CHECK(reports[k].rel_error >= 0.0);
        CHECK(reports[k].offdiag_residual <= 1e-12);
        if (k > 0) CHECK(reports[k].rel_error < reports[k - 1].rel_error);
    }
    CHECK(reports.back().rel_error <= 0.05);
    // mode tracking stays continuous along the schedule
    CHECK(slow_mode_continuity(p, schedule) >= 0.9);
}

TEST_CASE("reduction is exact without the dissipative channel") {
    CircuitParams p;
    p.lambda_q = {0.0, 0.0};
    SUBCASE("equal qubit decays: splitting matches to rounding") {
        p.gamma_q = {1.0, 1.0};
        for (const auto& r : compare_reduction(p, {65.0, 520.0}))
            CHECK(r.rel_error <= 1e-12);
    }
    SUBCASE("unequal decays: tiny residual from the damping convention") {
        for (const auto& r : compare_reduction(p, {65.0, 520.0}))
            CHECK(r.rel_error <= 1e-3);
    }
}

TEST_CASE("coupler folding converges in the dispersive parameter") {
    CircuitParams p;
    p.lambda_q = {0.0, 0.0};  // compare the coupler reductions in isolation
    std::vector<double> errs;
    for (double omega_c : {5200.0, 6000.0, 7500.0}) {
        // g / |Delta| = 30/700, 30/1500, 30/3000
        CircuitParams q = p;
        q.omega_c = omega_c;
        errs.push_back(compare_coupler_fold(q).rel_error);
    }
    CHECK(errs[0] <= 0.10);
    CHECK(errs[1] < errs[0]);
    CHECK(errs[2] < errs[1]);
    CHECK(errs[2] <= 0.01);
}

TEST_CASE("mode tracker refuses a photon-dominated eigenbasis") {
    // Circuit-built models cannot trip the guard: the dark combination of the
    // two qubits decouples from the photon with weight ~1, and the remaining
    // hybrid pair straddles 0.5 from above (sampled minimum 0.50002 over 2e5
    // random circuits).  So the refusal path gets a hand-built generator with
    // strongly one-sided qubit-photon coupling, which makes both coupled
    // eigenvectors photon-heavy.
    FullModel fm;
    fm.dim = 3;
    fm.matrix = Eigen::MatrixXcd::Zero(3, 3);
    fm.matrix(0, 2) = 0.01;  // qubit 1 barely leaks into the photon
    fm.matrix(2, 0) = 1.0;   // while the photon feeds back strongly
    fm.matrix(1, 1) = 5.0;   // qubit 2 detuned and uncoupled
    fm.basis_labels = {"q1", "q2", "a"};
    CHECK_THROWS_AS(slow_modes(fm), SlowModeAmbiguity);

    // An extreme but physical circuit still resolves two qubit-like modes.
    CircuitParams p;
    p.lambda_q = {200.0, 200.0};
    p.gamma_a = 10.0;
    const SlowModes sm = slow_modes(build_full_model(p));
    CHECK(sm.qubit_weight[0] >= 0.5);
    CHECK(sm.qubit_weight[1] >= 0.5);
}

TEST_CASE("slow modes come out in deterministic order with unit weight") {
    const CircuitParams p;
    const SlowModes sm = slow_modes(build_full_model(p));
    CHECK(sm.w[0].real() <= sm.w[1].real());
    CHECK(sm.qubit_weight[0] >= 0.5);
    CHECK(sm.qubit_weight[1] >= 0.5);
    CHECK(sm.v[0].norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("effective splitting evaluates its defining expression") {
    std::mt19937_64 rng(502);
    for (int k = 0; k < 2000; ++k) {
        const EffectiveModel m = derive_effective_model(random_params(rng));
        const complex s = effective_splitting(m);
        const complex big_s = complex(m.delta_prime[0] - m.delta_prime[1],
                                      -(m.big_gamma[0] - m.big_gamma[1]));
        const complex want2 = big_s * big_s + 4.0 * m.h_non(0, 1) * m.h_non(1, 0);
        CHECK(std::abs(s * s - want2) <= 1e-10 * std::max(1.0, std::abs(want2)));
        CHECK(s.real() >= 0.0);
    }
}
