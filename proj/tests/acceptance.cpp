// Acceptance suite: one PASS/FAIL line per criterion, with the measured runtime.
#include "ewlab/decomp.hpp"
#include "ewlab/optimality.hpp"
#include "ewlab/posmaps.hpp"
#include "ewlab/random.hpp"
#include "ewlab/witness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace ewlab;

namespace {

constexpr std::uint64_t kSeed = 20261014;

double max_abs(const ComplexMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

std::vector<FamilySpec> family_range(int n_lo, int n_hi, bool skip_half) {
    std::vector<FamilySpec> out;
    for (int n = n_lo; n <= n_hi; ++n) {
        for (int k = 1; k < n; ++k) {
            if (skip_half && 2 * k == n) continue;
            out.emplace_back(n, k);
        }
    }
    return out;
}

std::string tag(const FamilySpec& s) { return "(" + std::to_string(s.n) + "," + std::to_string(s.k) + ")"; }

ComplexMatrix unit(int n, int i, int j) {
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e(i, j) = 1.0;
    return e;
}

// Checks append failures to `why`; an empty `why` at the end means the criterion holds.
struct Report {
    std::ostringstream why;
    std::ostringstream info;
    void require(bool ok, const std::string& msg) {
        if (!ok) why << msg << "; ";
    }
};

bool criterion_1(Report& r) {
    // The Choi map: diagonal a11 + a33, a22 + a11, a33 + a22 and negated off-diagonal entries.
    const auto choi_map = [](const ComplexMatrix& a) {
        ComplexMatrix out = -a;
        out(0, 0) = a(0, 0) + a(2, 2);
        out(1, 1) = a(1, 1) + a(0, 0);
        out(2, 2) = a(2, 2) + a(1, 1);
        return out;
    };
    ComplexMatrix expect(9, 9);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) expect.block(3 * i, 3 * j, 3, 3) = choi_map(unit(3, i, j));
    }
    const double residual = max_abs(map_to_choi(phi_nk(FamilySpec(3, 2))) - expect);
    r.info << "residual=" << residual;
    r.require(residual <= 1e-14, "residual above 1e-14");
    return true;
}

bool criterion_2(Report& r) {
    double worst = 0.0;
    for (const FamilySpec& s : family_range(3, 6, false)) {
        const double lmin = min_eigenvalue(family_witness(s, true).matrix);
        const double err = std::abs(lmin + 1.0 / (s.n * (s.n - 1.0)));
        worst = std::max(worst, err);
        r.require(err <= 1e-10, "lambda_min off at " + tag(s));
    }
    r.info << "max_err=" << worst;
    return true;
}

bool criterion_3(Report& r) {
    double worst = 0.0;
    double lo = 1.0;
    double hi = -1.0;
    for (const FamilySpec& s : family_range(3, 6, false)) {
        const SpaResult spa_r = spa(family_witness(s, true), 64, derive_seed(kSeed, 300 + s.n * 8 + s.k));
        const double err = std::abs(spa_r.p_star - (s.n - 1.0) / (2.0 * s.n - 1.0));
        worst = std::max(worst, err);
        lo = std::min(lo, spa_r.min_eigenvalue);
        hi = std::max(hi, spa_r.min_eigenvalue);
        r.require(err <= 1e-12, "p_star off at " + tag(s));
        r.require(spa_r.min_eigenvalue >= -1e-10 && spa_r.min_eigenvalue <= 1e-8, "spa lambda_min outside range at " + tag(s));
        r.require(std::abs(spa_r.spa_state.trace().real() - 1.0) <= 1e-12, "spa trace at " + tag(s));
        r.require(spa_r.ppt, "spa state not PPT at " + tag(s));
    }
    r.info << "max_p_err=" << worst << " spa_lambda_min in [" << lo << "," << hi << "]";
    return true;
}

bool criterion_4(Report& r) {
    double worst = 0.0;
    int blocks = 0;
    for (const FamilySpec& s : family_range(3, 6, true)) {
        try {
            const SeparabilityCertificate c = spa_separability_certificate(s);
            worst = std::max(worst, c.reconstruction_residual);
            blocks += static_cast<int>(c.blocks.size());
            r.require(c.ok, "certificate not ok at " + tag(s));
            for (const auto& b : c.blocks) r.require(b.psd_ok && b.ppt_ok, "block fails PSD/PPT at " + tag(s));
        } catch (const CertificateFailure& e) {
            r.require(false, std::string(e.what()) + " at " + tag(s));
        }
    }
    r.info << "max_residual=" << worst << " blocks=" << blocks;
    return true;
}

bool criterion_5(Report& r) {
    Tolerances tol;
    tol.rank = 1e-8;
    for (const FamilySpec& s : family_range(3, 6, false)) {
        const SpanReport span = spanning_dimension(family_witness(s, true), 256, derive_seed(kSeed, 500 + s.n * 8 + s.k), tol);
        const int expect = s.n * s.n - s.n + 1;
        r.info << tag(s) << "=" << span.rank << " ";
        r.require(span.rank == expect, "rank " + std::to_string(span.rank) + " != " + std::to_string(expect) + " at " + tag(s));
    }
    return true;
}

bool criterion_6(Report& r) {
    for (int n : {4, 6}) {
        const DecompositionCertificate cert = decompose_half(n);
        const double pmin = min_eigenvalue(cert.p_part);
        const double qmin = min_eigenvalue(cert.q_part);
        r.info << "n=" << n << " residual=" << cert.residual << " minP=" << pmin << " minQ=" << qmin << " ";
        r.require(pmin >= -1e-10 && qmin >= -1e-10, "P or Q not PSD at n=" + std::to_string(n));
        r.require(cert.residual <= 1e-10, "residual above 1e-10 at n=" + std::to_string(n));

        const Witness w = family_witness(FamilySpec(n, n / 2), true);
        const DecompositionCertificate scaled = scale_certificate(cert, 1.0 / (n * (n - 1.0)));
        const SubtractionCheck sc = subtract_and_check(w, scaled.p_part, 1.0, 64, derive_seed(kSeed, 600 + n));
        r.require(sc.still_block_positive, "W - P not block-positive at n=" + std::to_string(n));
    }
    RankOneSearchOptions opts;
    opts.budget = 256;
    opts.seed = derive_seed(kSeed, 642);
    const RankOneSearchResult search = rank_one_search(family_witness(FamilySpec(4, 2), true), opts);
    r.require(search.certificate.has_value(), "no certificate on W^(4,2)");
    if (search.certificate) r.info << "eps(4,2)=" << search.certificate->epsilon;
    return true;
}

bool criterion_7(Report& r) {
    for (const FamilySpec& s : family_range(3, 5, true)) {
        const Witness w = family_witness(s, true);
        RankOneSearchOptions opts;
        opts.budget = 256;
        opts.seed = derive_seed(kSeed, 700 + s.n * 8 + s.k);
        const RankOneSearchResult search = rank_one_search(w, opts);
        r.require(!search.certificate.has_value(), "certificate found at " + tag(s));

        const FMatrixEvidence ev = fmatrix_evidence(phi_nk(s), 200, derive_seed(kSeed, 750 + s.n * 8 + s.k), false, s);
        double weakest = std::numeric_limits<double>::infinity();
        for (const auto& c : ev.candidates) {
            weakest = std::min(weakest, c.max_gram_norm);
            r.require(c.max_gram_norm > 1.0 + 1e-9, "candidate " + c.label + " never exceeds 1 at " + tag(s));
        }
        r.info << tag(s) << " ub=" << search.best.estimate.upper << " min_gram=" << weakest << " ";
    }
    return true;
}

bool criterion_8(Report& r) {
    for (int k : {1, 2}) {
        PptSearchOptions opts;
        opts.seed = derive_seed(kSeed, 800 + k);
        const PptSearchResult res = ppt_detection_search(family_witness(FamilySpec(3, k), true), opts);
        if (!res.detection) {
            r.require(false, "no PPT detection at (3," + std::to_string(k) + ")");
            continue;
        }
        const PptDetection& d = *res.detection;
        r.info << "(3," << k << ") value=" << d.value << " ";
        r.require(d.value < -1e-6, "value not below -1e-6");
        r.require(d.psd_residual <= 1e-8 && d.ppt_residual <= 1e-8 && d.trace_residual <= 1e-8,
                  "feasibility residual above 1e-8");
    }
    PptSearchOptions opts;
    opts.seed = derive_seed(kSeed, 804);
    const PptSearchResult half = ppt_detection_search(family_witness(FamilySpec(4, 2), true), opts);
    r.info << "(4,2) best=" << half.best.value;
    r.require(!half.detection.has_value(), "detection reported on W^(4,2)");
    return true;
}

bool criterion_9(Report& r) {
    Rng rng = make_rng(kSeed, 900);
    double worst_coeff = 0.0;
    for (int n = 3; n <= 5; ++n) {
        const ElementaryMap phi = phi_nk(FamilySpec(n, 1));
        for (int t = 0; t < 100; ++t) {
            ComplexVector probe = random_unit_vector(n, rng);
            for (int i = 0; i < n; ++i) {
                if (std::abs(probe(i)) < 1e-3) probe(i) = 1e-3;
            }
            const CoefficientSolve s = local_coefficients(phi.minus_terms, phi.plus_terms, probe);
            const ClosedFormCoefficients c = closed_form_coeffs_phi_n1(n, probe);
            const double err = std::max((s.alpha.row(0).head(n).transpose() - c.alpha).cwiseAbs().maxCoeff(),
                                        (s.alpha.row(0).tail(n).transpose() - c.beta).cwiseAbs().maxCoeff());
            worst_coeff = std::max(worst_coeff, err);
        }
    }
    r.require(worst_coeff <= 1e-10, "coefficient mismatch above 1e-10");

    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    double worst_zero = 0.0;
    for (const FamilySpec& s : family_range(3, 6, false)) {
        const ComplexMatrix w = family_witness(s, false).matrix;
        for (int t = 0; t < 100; ++t) {
            RealVector th(s.n);
            for (int i = 0; i < s.n; ++i) th(i) = angle(rng);
            const auto [x, y] = zero_family_phi(s.n, th);
            worst_zero = std::max(worst_zero, std::abs(product_expectation(w, BipartiteDims(s.n, s.n), x, y)));
        }
    }
    r.require(worst_zero <= 1e-12, "zero family expectation above 1e-12");
    r.info << "coeff_err=" << worst_coeff << " zero_err=" << worst_zero;
    return true;
}

bool criterion_10(Report& r) {
    Rng rng = make_rng(kSeed, 1000);
    double cj = 0.0;
    for (int t = 0; t < 50; ++t) {
        const BipartiteDims dims(2 + t % 4, 2 + (t / 4) % 4);
        const ComplexMatrix h = random_hermitian(dims.total(), rng);
        cj = std::max(cj, max_abs(map_to_choi(choi_to_map(h, dims)) - h));
    }
    r.require(cj <= 1e-9, "Choi round trip residual above 1e-9");

    double involution = 0.0;
    double trace = 0.0;
    for (int t = 0; t < 20; ++t) {
        const BipartiteDims dims(2 + t % 5, 2 + (t / 5) % 4);
        const ComplexMatrix a = random_gaussian_matrix(dims.total(), dims.total(), rng);
        for (Subsystem side : {Subsystem::A, Subsystem::B}) {
            const ComplexMatrix pt = partial_transpose(a, dims, side);
            involution = std::max(involution, max_abs(partial_transpose(pt, dims, side) - a));
            trace = std::max(trace, std::abs(pt.trace() - a.trace()));
        }
    }
    r.require(involution <= 1e-14, "partial transpose involution above 1e-14");
    r.require(trace <= 1e-14, "partial transpose trace change above 1e-14");

    double lu = 0.0;
    const std::vector<Witness> targets = {family_witness(FamilySpec(3, 2), true),
                                          Witness(random_hermitian(12, rng), BipartiteDims(3, 4))};
    for (std::size_t wi = 0; wi < targets.size(); ++wi) {
        const Witness& w = targets[wi];
        const double base = block_min(w, 64, derive_seed(kSeed, 1100 + wi)).min_value;
        for (int t = 0; t < 20; ++t) {
            const ComplexMatrix u = tensor(random_unitary(w.dims.dimA, rng), random_unitary(w.dims.dimB, rng));
            const ComplexMatrix m = u * w.matrix * u.adjoint();
            const Witness rotated(0.5 * (m + m.adjoint()), w.dims);
            const double v = block_min(rotated, 64, derive_seed(kSeed, 1200 + 32 * wi + t)).min_value;
            lu = std::max(lu, std::abs(v - base));
        }
    }
    r.require(lu <= 1e-8, "block_min local-unitary drift above 1e-8");
    r.info << "cj=" << cj << " pt_involution=" << involution << " pt_trace=" << trace << " lu_drift=" << lu;
    return true;
}

struct Criterion {
    int id;
    const char* name;
    double max_seconds;  // <= 0: no runtime bound
    std::function<bool(Report&)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "family construction matches the Choi map", 1.0, criterion_1},
        {2, "spectral minimum -1/(n(n-1))", 5.0, criterion_2},
        {3, "SPA weight (n-1)/(2n-1), PSD boundary, PPT", 0.0, criterion_3},
        {4, "SPA separability certificates", 10.0, criterion_4},
        {5, "spanning dimension n^2-n+1", 30.0, criterion_5},
        {6, "decomposable case k = n/2", 120.0, criterion_6},
        {7, "no rank-one subtraction and F-matrix evidence, k != n/2", 600.0, criterion_7},
        {8, "PPT detection of indecomposability", 300.0, criterion_8},
        {9, "closed-form coefficients and zero family", 10.0, criterion_9},
        {10, "infrastructure invariants", 0.0, criterion_10},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        Report r;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(r);
        } catch (const std::exception& e) {
            r.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.max_seconds > 0 && secs >= c.max_seconds) {
            std::ostringstream msg;
            msg << "runtime " << secs << " s exceeds " << c.max_seconds << " s";
            r.require(false, msg.str());
        }
        const std::string why = r.why.str();
        const bool ok = why.empty();
        if (!ok) ++failed;
        std::printf("%s %d %s [%.2f s] %s%s%s\n", ok ? "PASS" : "FAIL", c.id, c.name, secs, r.info.str().c_str(),
                    ok ? "" : " | ", why.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
