#include "lowtail/phase_curves.hpp"

#include "lowtail/breaking.hpp"
#include "lowtail/entropy.hpp"
#include "lowtail/symcheck.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace lowtail;
using doctest::Approx;

TEST_CASE("upper boundary solves its implicit equation for p <= 1/2") {
    for (double p : {0.05, 0.1, 0.3, 0.5}) {
        double q = upper_q_curve(p);
        CHECK(q > 0.0);
        CHECK(q < p);
        double residual = relative_entropy(p, q) + 0.5 * q * relative_entropy(p, q, 1);
        CHECK(std::abs(residual) <= 1e-9);
    }
}

TEST_CASE("boundary slopes at the origin") {
    SparseConstants c = sparse_constants({});
    double ratio_up = upper_q_curve(1e-3) / 1e-3;
    CHECK(ratio_up > 0.465);
    CHECK(ratio_up < 0.468);
    double ratio_lo = lower_q_curve(1e-3) / 1e-3;
    CHECK(ratio_lo > 0.205);
    CHECK(ratio_lo < 0.213);
    // the finite-p ratios approach the sparse constants from above
    CHECK(std::abs(ratio_up - c.r_upper) < 5e-4);
    CHECK(std::abs(ratio_lo - c.r_lower) < 5e-4);
}

TEST_CASE("ratio convergence to the sparse constants is monotone") {
    SparseConstants c = sparse_constants({});
    double prev_up = 1e9, prev_lo = 1e9;
    for (double p : {1e-1, 1e-2, 1e-3}) {
        double du = std::abs(upper_q_curve(p) / p - c.r_upper);
        double dl = std::abs(lower_q_curve(p) / p - c.r_lower);
        CHECK(du < prev_up);
        CHECK(dl < prev_lo);
        prev_up = du;
        prev_lo = dl;
    }
}

TEST_CASE("certificate boundary brackets the curve") {
    for (int i = 0; i < 50; ++i) {
        double p = 0.01 + (0.5 - 0.01) * i / 49.0;
        double q = upper_q_curve(p);
        CHECK(lt_k3_certificate(p, q + 1e-4).certified());
        CHECK_FALSE(lt_k3_certificate(p, q - 1e-3).certified());
    }
}

TEST_CASE("breaking boundary brackets the curve") {
    for (int i = 0; i < 20; ++i) {
        double p = 0.02 + (0.5 - 0.02) * i / 19.0;
        double q = lower_q_curve(p);
        CHECK(find_breaking(p, q - 1e-4).has_value());
        CHECK_FALSE(find_breaking(p, q + 1e-3).has_value());
    }
}

TEST_CASE("the two boundaries are ordered") {
    for (double p : {0.05, 0.1, 0.2, 0.4}) {
        CHECK(lower_q_curve(p) <= upper_q_curve(p));
        CHECK(upper_q_curve(p) <= p);
    }
    // known location at p = 0.1 from the two-block transition
    CHECK(lower_q_curve(0.1) == Approx(0.0215).epsilon(0.025));
}

TEST_CASE("upper-tail boundary formula") {
    // direct substitution at q = 0.6: p = 1 / (1 + (3/2)^5)
    CHECK(ut_boundary_k3(0.6) == Approx(1.0 / (1.0 + 7.59375)).epsilon(1e-12));
    // the analytic limit at q = 1/2
    CHECK(ut_boundary_k3(0.5) == Approx(1.0 / (1.0 + std::exp(2.0))).epsilon(1e-12));
    // residual of the defining equation
    for (double q : {0.3, 0.7, 0.9}) {
        double p = ut_boundary_k3(q);
        double residual = (1.0 + std::pow(1.0 / q - 1.0, 1.0 / (1.0 - 2.0 * q))) * p - 1.0;
        CHECK(std::abs(residual) <= 1e-12);
    }
    // continuity across the q = 1/2 convention
    CHECK(ut_boundary_k3(0.5 - 1e-9) == Approx(ut_boundary_k3(0.5)).epsilon(1e-6));
    CHECK(ut_boundary_k3(0.5 + 1e-9) == Approx(ut_boundary_k3(0.5)).epsilon(1e-6));
}

TEST_CASE("sparse constants against their defining equations") {
    SparseConstants c = sparse_constants({3, 10, 100});
    CHECK(c.r_upper == Approx(0.466).epsilon(2.5e-3));
    CHECK(c.r_lower == Approx(0.209).epsilon(5e-3));
    CHECK(c.r_trivial == Approx(0.186).epsilon(5e-3));
    CHECK(c.r_trivial < c.r_lower);
    CHECK(c.r_lower < c.r_upper);
    CHECK(c.r_upper < 1.0);

    CHECK(std::abs(1.5 * c.r_upper * std::log(c.r_upper) - c.r_upper + 1.0) <= 1e-9);
    CHECK(sparse_entropy(c.r_trivial) == Approx(0.5).epsilon(1e-9));
    // r_upper equivalently solves h(r) + r h'(r)/2 = 0
    CHECK(std::abs(sparse_entropy(c.r_upper) +
                   0.5 * c.r_upper * sparse_entropy(c.r_upper, 1)) <= 1e-9);
}

TEST_CASE("r_m is increasing in m and matches the triangle value") {
    double prev = 0.0;
    for (int m : {3, 4, 5, 6, 7, 8, 9, 10, 20, 100}) {
        double r = r_m(m);
        CHECK(r > prev);
        CHECK(r < 1.0);
        prev = r;
    }
    CHECK(r_m(3) == Approx(0.686).epsilon(1e-3));
    CHECK(r_m(10) == Approx(0.855).epsilon(1e-3));
}

TEST_CASE("sparse upper-tail reference rate") {
    CHECK(ut_sparse_rate(1.0) == Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(ut_sparse_rate(3.375) == Approx(2.25).epsilon(1e-12)); // crossover (3/2)^3
    CHECK(ut_sparse_rate(8.0) == Approx(4.0).epsilon(1e-15));
    CHECK_THROWS_AS(ut_sparse_rate(0.0), std::domain_error);
}

TEST_CASE("data emission format and determinism") {
    std::ostringstream a, b;
    emit_to_stream("lt-k3", {{"p", 0.1}, {"q", 0.045}}, 100, a);
    emit_to_stream("lt-k3", {{"p", 0.1}, {"q", 0.045}}, 100, b);
    CHECK(a.str() == b.str());

    // two space-separated fields per line, x ascending, no header
    std::istringstream in(a.str());
    std::string line;
    double prev_x = -1e300;
    int rows = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        double x, y;
        std::string extra;
        CHECK(static_cast<bool>(ls >> x >> y));
        CHECK_FALSE(static_cast<bool>(ls >> extra));
        CHECK(x > prev_x);
        prev_x = x;
        ++rows;
    }
    CHECK(rows == 100);

    CHECK_THROWS_AS(emit_to_stream("no-such-curve", {}, 10, a), std::invalid_argument);
    std::ostringstream c;
    CHECK_THROWS_AS(emit_to_stream("lt-k3", {{"p", 0.1}}, 10, c), std::invalid_argument);
}

TEST_CASE("gap files reproduce the certificate and breaking verdicts by sign") {
    auto min_y = [](const std::string& id, std::map<std::string, double> params) {
        std::ostringstream out;
        emit_to_stream(id, params, 1000, out);
        std::istringstream in(out.str());
        double x, y, best = 1e300;
        while (in >> x >> y) best = std::min(best, y);
        return best;
    };
    // negative dip iff inconclusive
    CHECK(min_y("lt-k3", {{"p", 0.1}, {"q", 0.045}}) < -1e-12);
    CHECK(min_y("lt-k3", {{"p", 0.1}, {"q", 0.06}}) >= -1e-12);
    // negative dip iff a sparse witness exists
    CHECK(min_y("bip-sparse", {{"r", 0.2}}) < -1e-12);
    CHECK(min_y("bip-sparse", {{"r", 0.21}}) >= -1e-12);
}

TEST_CASE("curve emitters produce in-range samples") {
    std::ostringstream up;
    emit_to_stream("upper-q", {}, 12, up);
    std::istringstream in_up(up.str());
    double p, q;
    int rows = 0;
    while (in_up >> p >> q) {
        CHECK(q > 0.0);
        CHECK(q <= p);
        ++rows;
    }
    CHECK(rows == 12);

    std::ostringstream lo;
    emit_to_stream("lower-q", {}, 8, lo);
    std::istringstream in_lo(lo.str());
    rows = 0;
    while (in_lo >> p >> q) {
        CHECK(q > 0.0);
        CHECK(q < p);
        ++rows;
    }
    CHECK(rows == 8);

    // the upper-tail boundary is emitted in path order along q
    std::ostringstream ut;
    emit_to_stream("ut-boundary", {}, 64, ut);
    std::istringstream in_ut(ut.str());
    double prev_q = -1.0, max_p = 0.0;
    rows = 0;
    while (in_ut >> p >> q) {
        CHECK(q > prev_q);
        prev_q = q;
        max_p = std::max(max_p, p);
        ++rows;
    }
    CHECK(rows == 64);
    CHECK(max_p == Approx(1.0 / (1.0 + std::exp(2.0))).epsilon(1e-3));
}

TEST_CASE("file emission writes and fails loudly") {
    std::string path = "test_emit_tmp.dat";
    emit_file("diagonal", {}, 10, path);
    std::ifstream in(path);
    CHECK(in.good());
    std::string first;
    std::getline(in, first);
    CHECK(first == "0 0");
    in.close();
    std::remove(path.c_str());

    CHECK_THROWS_AS(emit_file("diagonal", {}, 10, "/no/such/dir/file.dat"),
                    std::runtime_error);
}
