#include "support.hpp"

#include "ewlab/decomp.hpp"
#include "ewlab/optimality.hpp"

#include <doctest.h>

using namespace ewlab;
using namespace testing;

namespace {

Witness flip_witness() { return Witness(flip(2), BipartiteDims(2, 2)); }

Witness untagged(const Witness& w) { return Witness(w.matrix, w.dims, w.normalized); }

// Distance of the normalized composite vector from {xi : xi_00 = xi_11 = ... }.
double distance_from_equal_diagonal(const ComplexVector& composite, int n) {
    const ComplexVector v = composite / composite.norm();
    Complex mean = 0.0;
    for (int i = 0; i < n; ++i) mean += v(i * n + i);
    mean /= static_cast<double>(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += std::norm(v(i * n + i) - mean);
    return std::sqrt(acc);
}

}  // namespace

TEST_CASE("subtract_and_check: the decomposition part leaves a block-positive remainder") {
    const Witness w = family_witness(FamilySpec(4, 2), true);
    const DecompositionCertificate cert = scale_certificate(decompose_half(4), 1.0 / 12.0);
    const SubtractionCheck r = subtract_and_check(w, cert.p_part, 1.0, 64, 1);
    CHECK(r.still_block_positive);
    CHECK(r.still_witness);
    CHECK(r.report.min_value >= -1e-9);
    const ComplexMatrix q_gamma = partial_transpose(cert.q_part, w.dims, cert.gamma_side);
    CHECK(max_abs(w.matrix - cert.p_part - q_gamma) <= 1e-12);
}

TEST_CASE("subtract_and_check: removing the identity breaks block positivity") {
    const Witness w = family_witness(FamilySpec(3, 1), true);
    const SubtractionCheck r = subtract_and_check(w, ComplexMatrix::Identity(9, 9), 1.0, 16, 2);
    CHECK_FALSE(r.still_block_positive);
    CHECK_FALSE(r.still_witness);
    CHECK(r.report.min_value <= -1.0 + 1e-12);

    const ComplexVector e12 = tensor(basis(3, 0), basis(3, 1));
    CHECK(expectation(w.matrix - ComplexMatrix::Identity(9, 9), e12) == doctest::Approx(-1.0));
}

TEST_CASE("subtract_and_check: small epsilon matches validation") {
    const Witness w = family_witness(FamilySpec(3, 1), true);
    const ValidationReport v = validate_witness(w, 16, 3);
    const SubtractionCheck r = subtract_and_check(w, ComplexMatrix::Identity(9, 9), 1e-13, 16, 3);
    CHECK(r.still_block_positive == v.block_positive);
    CHECK(r.still_witness == v.is_witness);
    CHECK(r.min_eigenvalue == doctest::Approx(v.min_eigenvalue).epsilon(1e-9));
}

TEST_CASE("subtract_and_check rejects bad input") {
    const Witness w = family_witness(FamilySpec(3, 1), true);
    CHECK_THROWS_AS(subtract_and_check(w, -ComplexMatrix::Identity(9, 9), 1.0, 4, 1), InvalidArgument);
    CHECK_THROWS_AS(subtract_and_check(w, ComplexMatrix::Identity(9, 9), 0.0, 4, 1), InvalidArgument);
    CHECK_THROWS_AS(subtract_and_check(w, ComplexMatrix::Identity(4, 4), 1.0, 4, 1), InvalidDims);
}

TEST_CASE("subtraction_ratio and multiscale probes") {
    const Witness w = family_witness(FamilySpec(3, 1), true);
    const ComplexVector c = tensor(basis(3, 0), basis(3, 0));
    CHECK(std::isinf(subtraction_ratio(w.matrix, w.dims, c, basis(3, 1), basis(3, 1))));
    // <00|W|00> = 1/6 and the overlap is 1
    CHECK(subtraction_ratio(w.matrix, w.dims, c, basis(3, 0), basis(3, 0)) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

    const std::vector<ComplexVector> probes = multiscale_probes(3, 5);
    CHECK(probes.size() >= 6);
    for (const auto& p : probes) {
        CHECK(p.size() == 3);
        CHECK(p.norm() == doctest::Approx(1.0));
    }
    const std::vector<ComplexVector> again = multiscale_probes(3, 5);
    REQUIRE(again.size() == probes.size());
    CHECK(max_abs(again.back() - probes.back()) == 0.0);
}

TEST_CASE("rank_one_search certifies the decomposable member") {
    const Witness w = family_witness(FamilySpec(4, 2), true);
    RankOneSearchOptions opts;
    opts.seed = 11;
    const RankOneSearchResult r = rank_one_search(w, opts);
    REQUIRE(r.certificate.has_value());
    const NonOptimalityCertificate& cert = *r.certificate;
    CHECK(cert.epsilon > 1e-6);
    CHECK(cert.verification.min_value >= -1e-9);
    CHECK(cert.min_eigenvalue_after < 0.0);
    CHECK(min_eigenvalue(cert.d) >= -1e-10);
    CHECK(max_abs(cert.d - projector(cert.direction)) <= 1e-12);

    // fresh seed, doubled budget
    const SubtractionCheck again = subtract_and_check(w, cert.d, cert.epsilon, 2 * opts.budget, 987654321);
    CHECK(again.report.min_value >= -1e-9);
    CHECK(again.still_witness);
}

TEST_CASE("rank_one_search finds nothing on W^(3,1)") {
    const Witness w = family_witness(FamilySpec(3, 1), true);
    RankOneSearchOptions opts;
    opts.seed = 12;
    const RankOneSearchResult r = rank_one_search(w, opts);
    CHECK_FALSE(r.certificate.has_value());
    CHECK(r.best.estimate.upper <= 1e-6);
    CHECK(r.candidates_evaluated >= opts.budget);
}

TEST_CASE("rank_one_search recovers a planted rank-one excess") {
    Rng rng = make_rng(50, 0);
    struct Case {
        Witness base;
        const char* name;
    };
    for (const Case& base : {Case{flip_witness(), "flip"}, Case{family_witness(FamilySpec(3, 1), true), "W31"}}) {
        CAPTURE(base.name);
        const ComplexVector c0 = random_unit_vector(base.base.dims.total(), rng);
        const Witness planted(base.base.matrix + 0.1 * projector(c0), base.base.dims);
        RankOneSearchOptions opts;
        opts.budget = 16;
        opts.seed = 13;
        opts.seed_candidates = {c0};
        const RankOneSearchResult r = rank_one_search(planted, opts);
        REQUIRE(r.seeded.size() == 1);
        CHECK(r.seeded[0].estimate.lower >= 0.1 * (1.0 - 1e-2));
        REQUIRE(r.certificate.has_value());
        CHECK(r.certificate->epsilon > 1e-6);
        const SubtractionCheck again =
            subtract_and_check(planted, r.certificate->d, r.certificate->epsilon, 2 * opts.budget, 31337);
        CHECK(again.report.min_value >= -1e-9);
    }
}

TEST_CASE("spanning dimension of the family") {
    const SpanReport r3 = spanning_dimension(family_witness(FamilySpec(3, 1), true), 256, 1);
    CHECK(r3.rank == 7);
    CHECK(r3.ambient == 9);
    CHECK_FALSE(r3.spanning);

    const Witness w52 = family_witness(FamilySpec(5, 2), true);
    const SpanReport r5 = spanning_dimension(w52, 256, 2);
    CHECK(r5.rank == 21);
    CHECK(r5.ambient == 25);
    CHECK_FALSE(r5.spanning);
    for (const auto& z : r5.collected) {
        CHECK(std::abs(product_expectation(w52.matrix, w52.dims, z.x, z.y)) <= 1e-9);
        CHECK(distance_from_equal_diagonal(z.composite(), 5) <= 1e-8);
    }
}

TEST_CASE("spanning dimension of the flip operator") {
    const SpanReport r = spanning_dimension(flip_witness(), 64, 3);
    CHECK(r.rank == 4);
    CHECK(r.spanning);
    CHECK(r.from_family == 0);

    // x (x) x-perp vectors alone reach full rank
    Rng rng = make_rng(51, 0);
    std::vector<ComplexVector> zeros;
    for (int t = 0; t < 8; ++t) {
        const ComplexVector x = random_unit_vector(2, rng);
        ComplexVector perp(2);
        perp << -std::conj(x(1)), std::conj(x(0));
        CHECK(std::abs(expectation(flip(2), tensor(x, perp))) < 1e-14);
        zeros.push_back(tensor(x, perp));
    }
    CHECK(numerical_rank(zeros, 1e-8) == 4);
}

TEST_CASE("spanning search rank grows with the budget") {
    const Witness w = untagged(family_witness(FamilySpec(4, 1), true));
    int previous = 0;
    for (int budget : {4, 16, 64, 256}) {
        const SpanReport r = spanning_dimension(w, budget, 4);
        CHECK(r.from_family == 0);
        CHECK(r.rank >= previous);
        CHECK(r.rank <= r.ambient);
        previous = r.rank;
        for (const auto& z : r.collected) CHECK(distance_from_equal_diagonal(z.composite(), 4) <= 1e-8);
    }
    CHECK(previous == 13);
}

TEST_CASE("zero family") {
    const auto [x0, y0] = zero_family_phi(3, RealVector::Zero(3));
    CHECK(max_abs(x0 - ComplexVector::Ones(3)) == 0.0);
    CHECK(max_abs(y0 - ComplexVector::Ones(3)) == 0.0);
    CHECK(std::abs(product_expectation(family_witness(FamilySpec(3, 1), false).matrix, BipartiteDims(3, 3), x0, y0)) <=
          1e-14);

    Rng rng = make_rng(52, 0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    for (int n = 3; n <= 6; ++n) {
        for (int k = 1; k < n; ++k) {
            const ComplexMatrix w = family_witness(FamilySpec(n, k), false).matrix;
            double worst = 0.0;
            for (int t = 0; t < 100; ++t) {
                RealVector th(n);
                for (int i = 0; i < n; ++i) th(i) = angle(rng);
                const auto [x, y] = zero_family_phi(n, th);
                worst = std::max(worst, std::abs(product_expectation(w, BipartiteDims(n, n), x, y)));
                const ComplexVector xi = tensor(x, y);
                for (int i = 0; i < n; ++i) CHECK(std::abs(xi(i * n + i) - 1.0) < 1e-14);
            }
            CHECK(worst <= 1e-12);
        }
    }
    CHECK_THROWS_AS(zero_family_phi(3, RealVector::Zero(4)), InvalidDims);
}

TEST_CASE("unit corner norm") {
    ComplexMatrix f(2, 2);
    f << 1.0, 0.5, 0.5, 1.0;
    CHECK(unit_corner_norm_exceeds(f));
    f << 1.0, 0.0, 0.0, 0.3;
    CHECK_FALSE(unit_corner_norm_exceeds(f));
    f << 1.0, 1e-3, 1e-3, 1.0;
    CHECK(unit_corner_norm_exceeds(f));
    f << 1.0, Complex(0.0, 1e-3), Complex(0.0, -1e-3), 0.5;
    CHECK(unit_corner_norm_exceeds(f));

    f << 2.0, 0.0, 0.0, 1.0;
    CHECK_THROWS_AS(unit_corner_norm_exceeds(f), InvalidArgument);
    f << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(unit_corner_norm_exceeds(f), InvalidArgument);
    CHECK_THROWS_AS(unit_corner_norm_exceeds(ComplexMatrix::Identity(3, 3)), InvalidArgument);
}

TEST_CASE("candidate mesh shape") {
    const auto mesh = fmatrix_candidate_mesh(3, 3, 1);
    bool has_identity = false;
    bool has_trace_zero = false;
    for (const auto& [label, c] : mesh) {
        CHECK(c.rows() == 3);
        if (label.rfind("identity", 0) == 0) has_identity = true;
        if (label.rfind("diag_trace_zero", 0) == 0) {
            has_trace_zero = true;
            CHECK(std::abs(c.trace()) < 1e-12);
            CHECK(max_abs(c - ComplexMatrix(c.diagonal().asDiagonal())) == 0.0);
        }
    }
    CHECK(has_identity);
    CHECK(has_trace_zero);
}

TEST_CASE("verdict names and labels") {
    CHECK(verdict_name(VerdictKind::CertifiedNonOptimal) == "non_optimal");
    CHECK(verdict_name(VerdictKind::SpanningOptimal) == "spanning_optimal");
    CHECK(verdict_name(VerdictKind::NoCertificateFound) == "no_certificate");
    CHECK(verdict_label(VerdictKind::NoCertificateFound) == "consistent with optimal");
}

TEST_CASE("optimality_report verdicts") {
    OptimalityConfig cfg;
    cfg.seed = 7;

    const OptimalityVerdict half = optimality_report(family_witness(FamilySpec(4, 2), true), cfg);
    CHECK(half.kind == VerdictKind::CertifiedNonOptimal);
    REQUIRE(half.certificate.has_value());
    CHECK(half.certificate->epsilon > 1e-6);

    const OptimalityVerdict spanning = optimality_report(flip_witness(), cfg);
    CHECK(spanning.kind == VerdictKind::SpanningOptimal);
    CHECK(spanning.span.rank == spanning.span.ambient);

    const OptimalityVerdict w31 = optimality_report(family_witness(FamilySpec(3, 1), true), cfg);
    CHECK(w31.kind == VerdictKind::NoCertificateFound);
    CHECK_FALSE(w31.certificate.has_value());
    REQUIRE(w31.fmatrix.has_value());
    CHECK(w31.fmatrix->all_exceed);
    for (const auto& c : w31.fmatrix->candidates) CHECK(c.max_gram_norm > 1.0 + 1e-9);

    const OptimalityVerdict again = optimality_report(family_witness(FamilySpec(3, 1), true), cfg);
    CHECK(again.kind == w31.kind);
    CHECK(again.span.rank == w31.span.rank);
    REQUIRE(again.search.has_value());
    CHECK(again.search->best.estimate.upper == w31.search->best.estimate.upper);
    CHECK(again.fmatrix->candidates.back().max_gram_norm == w31.fmatrix->candidates.back().max_gram_norm);
}
