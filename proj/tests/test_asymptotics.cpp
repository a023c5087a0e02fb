#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "mwl/asymptotics.hpp"
#include "mwl/errors.hpp"

using namespace mwl;

namespace {
std::vector<std::pair<double, double>> synth(double A, double p, double c,
                                             std::initializer_list<double> hbars) {
    std::vector<std::pair<double, double>> pts;
    for (double h : hbars) pts.push_back({h, -A / h + p * std::log(h) + c});
    return pts;
}
}  // namespace

TEST_CASE("fabricated exact model is recovered to 1e-6") {
    auto pts = synth(2.0, -1.0, std::log(3.0),
                     {0.12, 0.10, 0.08, 0.07, 0.06, 0.05});
    FitResult f = fit_log_asymptotics(pts);
    CHECK(f.A == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(f.p == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(f.coeff == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(f.max_abs_residual < 1e-10);
}

TEST_CASE("fit recovery over a parameter lattice") {
    for (double A : {0.5, 1.0, 2.5})
        for (double p : {-1.0, 0.0, 1.0})
            for (double c : {-0.7, 0.0, 1.2}) {
                auto pts = synth(A, p, c, {0.15, 0.12, 0.1, 0.085, 0.07, 0.06});
                FitResult f = fit_log_asymptotics(pts);
                CHECK(f.A == doctest::Approx(A).epsilon(1e-6).scale(1.0));
                CHECK(f.p == doctest::Approx(p).epsilon(1e-6).scale(1.0));
                CHECK(f.c == doctest::Approx(c).epsilon(1e-6).scale(1.0));
            }
}

TEST_CASE("fit preconditions") {
    auto few = synth(1.0, 0.0, 0.0, {0.1, 0.09, 0.08});
    CHECK_THROWS_AS(fit_log_asymptotics(few), InsufficientRangeError);
    // essentially a single hbar: ill-conditioned design
    auto narrow = synth(1.0, 0.0, 0.0,
                        {0.1, 0.1 + 1e-9, 0.1 + 2e-9, 0.1 + 3e-9, 0.1 + 4e-9});
    CHECK_THROWS_AS(fit_log_asymptotics(narrow), ConditioningError);
}

namespace {
SweepResult make_sweep(double A, double p, double c, int sign, int count,
                       double A_ref, int n_valid = 6) {
    SweepResult s;
    s.k = 2;
    s.action_ref = A_ref;
    s.count_ref = count;
    s.topologies = 1;
    s.tree_count = {count};
    s.tree_length_min = {A_ref};
    std::vector<double> hb = {0.12, 0.10, 0.09, 0.08, 0.07, 0.06};
    for (int i = 0; i < 6; ++i) {
        SweepPoint pt;
        pt.hbar = hb[i];
        pt.valid = i < n_valid;
        pt.log_abs = -A / hb[i] + p * std::log(hb[i]) + c;
        pt.sign = sign;
        if (!pt.valid) pt.flag = "noise-floor";
        s.points.push_back(pt);
    }
    return s;
}
}  // namespace

TEST_CASE("verdict passes for a consistent sweep") {
    SweepResult s = make_sweep(1.5, 0.0, std::log(2.0), -1, -2, 1.5);
    TheoremVerdict v = verify_theorem(s);
    CHECK(v.issued);
    CHECK(v.pass_A);
    CHECK(v.pass_p);
    CHECK(v.pass_coeff);
    CHECK(v.pass_sign);
    CHECK(v.pass);
    CHECK(v.coeff_rounded == -2);
}

TEST_CASE("verdict refused with too few valid points") {
    SweepResult s = make_sweep(1.5, 0.0, 0.0, 1, 1, 1.5, 3);
    TheoremVerdict v = verify_theorem(s);
    CHECK(!v.issued);
}

TEST_CASE("localization clause for empty moduli") {
    // count 0: exponent must exceed the action reference by 3 sigma
    SweepResult s = make_sweep(2.0, 0.0, 0.0, 1, 0, 1.5);
    TheoremVerdict v = verify_theorem(s);
    CHECK(v.issued);
    CHECK(v.pass);
    SweepResult bad = make_sweep(1.5, 0.0, 0.0, 1, 0, 1.5);
    TheoremVerdict vb = verify_theorem(bad);
    CHECK(!vb.pass);
}

TEST_CASE("sign flips across the sweep fail the sign check") {
    SweepResult s = make_sweep(1.5, 0.0, 0.0, 1, 1, 1.5);
    s.points[3].sign = -1;
    TheoremVerdict v = verify_theorem(s);
    CHECK(!v.pass_sign);
}

TEST_CASE("serialization carries estimates and references") {
    SweepResult s = make_sweep(1.0, -1.0, 0.0, 1, 1, 1.0);
    TheoremVerdict v = verify_theorem(s);
    auto j = v.to_json();
    CHECK(j["A_ref"] == 1.0);
    CHECK(j.contains("power_est"));
    auto js = s.to_json();
    CHECK(js["points"].size() == 6);
    std::string csv = s.to_csv();
    CHECK(csv.find("k,hbar,log_abs_pairing,sign,topology_id") == 0);
}
