#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>

#include "swanlab/datum_rules.hpp"
#include "swanlab/io.hpp"

using namespace swanlab;

namespace {

FqPtr F3 = make_fq(3, 1);
FqPtr F2 = make_fq(2, 1);

DiffForm w3(const std::string& a) { return parse_diff(F3, a); }

RamDatum datum3(std::vector<std::pair<Rat, std::string>> pairs) {
    RamDatum d{3, {}};
    for (auto& [del, a] : pairs) d.pairs.push_back({del, w3(a)});
    return d;
}

bool has_clause(const ValidationReport& r, const std::string& clause,
                bool value) {
    for (const auto& c : r.conditions)
        if (c.clause == clause && c.pass == value) return true;
    return false;
}

}  // namespace

TEST_CASE("single pairs split on the logarithmic boundary") {
    ValidationReport ok = validate_datum(datum3({{rat(3, 2), "1"}}));
    CHECK(ok.pass);
    CHECK(has_clause(ok, "i.a", true));

    ValidationReport bad = validate_datum(datum3({{rat(1, 3), "1"}}));
    CHECK_FALSE(bad.pass);
    CHECK(has_clause(bad, "i.b", false));

    ValidationReport exact = validate_datum(datum3({{rat(1, 3), "s"}}));
    CHECK(exact.pass);
    CHECK(has_clause(exact, "i.b", true));

    CHECK_FALSE(validate_datum(datum3({{rat(5, 3), "1"}})).pass);
}

TEST_CASE("two-pair data hit each ordering clause") {
    // ds = s * ds/s and s^2 ds = s^3 * ds/s: the floor case delta_2 = p
    // delta_1 with Cartier image equal to the first form.
    ValidationReport floor =
        validate_datum(datum3({{rat(1, 3), "s"}, {rat(1), "s^3"}}));
    CHECK(floor.pass);
    CHECK(has_clause(floor, "iii.a", true));

    ValidationReport mid =
        validate_datum(datum3({{rat(1, 3), "s"}, {rat(5, 4), "s"}}));
    CHECK(mid.pass);
    CHECK(has_clause(mid, "iii.b", true));

    ValidationReport top =
        validate_datum(datum3({{rat(1, 3), "s"}, {rat(3, 2), "1"}}));
    CHECK(top.pass);
    CHECK(has_clause(top, "iii.c", true));

    ValidationReport corner =
        validate_datum(datum3({{rat(1, 2), "s"}, {rat(3, 2), "1-s"}}));
    CHECK(corner.pass);
    CHECK(has_clause(corner, "iii.d", true));

    ValidationReport step =
        validate_datum(datum3({{rat(1), "s"}, {rat(2), "-s"}}));
    CHECK(step.pass);
    CHECK(has_clause(step, "ii", true));

    CHECK_FALSE(validate_datum(datum3({{rat(1), "s"}, {rat(2), "s"}})).pass);
    CHECK_FALSE(
        validate_datum(datum3({{rat(1), "s"}, {rat(5, 2), "-s"}})).pass);
}

TEST_CASE("delta relations select the clause; forms never do") {
    // C(omega_2) = omega_2 here, but the deltas demand the in-between
    // clause, so the datum fails at iii.b instead of drifting to iii.c.
    ValidationReport r =
        validate_datum(datum3({{rat(1, 3), "s"}, {rat(5, 4), "1"}}));
    CHECK_FALSE(r.pass);
    CHECK(has_clause(r, "iii.b", false));

    ValidationReport win =
        validate_datum(datum3({{rat(1, 3), "s"}, {rat(1, 2), "s"}}));
    CHECK_FALSE(win.pass);
    CHECK(has_clause(win, "iii.window", false));
}

TEST_CASE("malformed data are rejected before any clause runs") {
    CHECK_THROWS_AS(validate_datum(RamDatum{4, {{rat(1), w3("s")}}}),
                    InvalidInput);
    CHECK_THROWS_AS(validate_datum(RamDatum{3, {}}), InvalidInput);
    CHECK_THROWS_AS(validate_datum(datum3({{rat(1), "0"}})), InvalidInput);
    CHECK_THROWS_AS(validate_datum(datum3({{rat(-1, 3), "s"}})),
                    InvalidInput);
    CHECK_THROWS_AS(
        validate_datum(datum3({{rat(1), "s"}, {rat(1, 2), "s"}})),
        InvalidInput);
    CHECK_THROWS_AS(
        validate_datum(RamDatum{3, {{rat(1), parse_diff(F2, "s")}}}),
        InvalidInput);
}

TEST_CASE("char-p break sequences follow the two admissibility rules") {
    CHECK(validate_charp_breaks({2, {1, 2, 5}}).pass);

    ValidationReport first = validate_charp_breaks({2, {2, 4}});
    CHECK_FALSE(first.pass);
    CHECK(has_clause(first, "i", false));

    ValidationReport second = validate_charp_breaks({2, {1, 4}});
    CHECK_FALSE(second.pass);
    CHECK(has_clause(second, "ii", false));

    CHECK_THROWS_AS(validate_charp_breaks({2, {}}), InvalidInput);
    CHECK_THROWS_AS(validate_charp_breaks({2, {3, 3}}), InvalidInput);
    CHECK_THROWS_AS(validate_charp_breaks({4, {1}}), InvalidInput);
}

TEST_CASE("break enumeration matches its own validator by brute force") {
    std::vector<BreakSeqCharP> tiny = enumerate_charp_breaks(2, 1, 4);
    REQUIRE(tiny.size() == 2);
    CHECK(tiny[0] == BreakSeqCharP{2, {1}});
    CHECK(tiny[1] == BreakSeqCharP{2, {3}});

    std::vector<BreakSeqCharP> six = enumerate_charp_breaks(3, 2, 6);
    REQUIRE(six.size() == 4);
    CHECK(six[0] == BreakSeqCharP{3, {1, 3}});
    CHECK(six[1] == BreakSeqCharP{3, {1, 4}});
    CHECK(six[2] == BreakSeqCharP{3, {1, 5}});
    CHECK(six[3] == BreakSeqCharP{3, {2, 6}});

    CHECK(enumerate_charp_breaks(5, 3, 0).empty());

    for (long long p : {2LL, 3LL}) {
        for (int n = 1; n <= 3; ++n) {
            const long long u_max = 10;
            std::vector<std::vector<long long>> all;
            std::vector<long long> cur;
            auto rec = [&](auto&& self, long long lo) -> void {
                if ((int)cur.size() == n) {
                    all.push_back(cur);
                    return;
                }
                for (long long v = lo; v <= u_max; ++v) {
                    cur.push_back(v);
                    self(self, v + 1);
                    cur.pop_back();
                }
            };
            rec(rec, 1);
            std::vector<BreakSeqCharP> expect;
            for (auto& u : all)
                if (validate_charp_breaks({p, u}).pass)
                    expect.push_back({p, u});
            std::vector<BreakSeqCharP> got =
                enumerate_charp_breaks(p, n, u_max);
            REQUIRE(got.size() == expect.size());
            for (size_t i = 0; i < got.size(); ++i)
                CHECK(got[i] == expect[i]);
        }
    }
}

TEST_CASE("two-break window inequalities") {
    ValidationReport low = check_hyodo(datum3({{rat(1, 3), "s"}, {rat(1), "s^3"}}));
    CHECK(low.pass);
    CHECK(has_clause(low, "b", true));

    ValidationReport high = check_hyodo(datum3({{rat(1), "s"}, {rat(2), "-s"}}));
    CHECK(high.pass);
    CHECK(has_clause(high, "a", true));

    ValidationReport fail =
        check_hyodo(datum3({{rat(1, 3), "s"}, {rat(1, 2), "s"}}));
    CHECK_FALSE(fail.pass);
    CHECK(has_clause(fail, "b", false));

    CHECK_THROWS_AS(check_hyodo(datum3({{rat(1), "s"}})), InvalidInput);
}

TEST_CASE("valid data passing the classification also pass the window") {
    for (const RamDatum& d : enumerate_valid_data(F3, 3, rat(1, 6), 2)) {
        REQUIRE(validate_datum(d).pass);
        if (d.pairs.size() == 2) CHECK(check_hyodo(d).pass);
    }
}

TEST_CASE("datum enumeration agrees with a direct scan") {
    const Rat step = rat(1, 6);
    const int bound = 2;
    std::vector<RamDatum> got = enumerate_valid_data(F3, 3, step, bound);
    CHECK(!got.empty());

    std::vector<Rat> grid;
    for (Rat t = step; t <= rat(3, 2); t += step) grid.push_back(t);
    std::vector<DiffForm> palette;
    for (int c0 = 0; c0 < 3; ++c0)
        for (int c1 = 0; c1 < 3; ++c1)
            for (int c2 = 0; c2 < 3; ++c2) {
                if (!c0 && !c1 && !c2) continue;
                std::vector<int> rep{0, 1, -1};
                palette.push_back(w3(std::to_string(rep[c0]) + "+" +
                                     std::to_string(rep[c1]) + "*s+" +
                                     std::to_string(rep[c2]) + "*s^2"));
            }

    std::set<std::string> expect;
    auto consider = [&](const RamDatum& d) {
        try {
            if (validate_datum(d).pass) expect.insert(ram_datum_json(d));
        } catch (const InvalidInput&) {
        }
    };
    for (const Rat& d1 : grid)
        for (const DiffForm& a : palette) {
            consider({3, {{d1, a}}});
            std::vector<Rat> seconds = grid;
            seconds.push_back(d1 + 1);
            for (const Rat& d2 : seconds)
                for (const DiffForm& b : palette)
                    consider({3, {{d1, a}, {d2, b}}});
        }

    std::set<std::string> got_keys;
    for (const RamDatum& d : got) got_keys.insert(ram_datum_json(d));
    CHECK(got_keys.size() == got.size());  // no duplicates
    CHECK(got_keys == expect);
}

TEST_CASE("degenerate enumeration grids") {
    CHECK(enumerate_valid_data(F3, 3, rat(2), 2).empty());
    for (const RamDatum& d : enumerate_valid_data(F3, 3, rat(3, 2), 2)) {
        DiffForm c = cartier(d.pairs[0].omega);
        CHECK(c == d.pairs[0].omega);
    }
    CHECK_THROWS_AS(enumerate_valid_data(F3, 2, rat(1, 2), 1), InvalidInput);
    CHECK_THROWS_AS(enumerate_valid_data(F3, 3, rat(0), 1), InvalidInput);
}

TEST_CASE("scalar-tolerant datum comparison is global") {
    RamDatum a = datum3({{rat(1, 3), "s"}, {rat(1), "s^3"}});
    RamDatum b = datum3({{rat(1, 3), "2*s"}, {rat(1), "2*s^3"}});
    RamDatum mixed = datum3({{rat(1, 3), "2*s"}, {rat(1), "s^3"}});
    RamDatum other = datum3({{rat(1, 3), "s^2"}, {rat(1), "s^3"}});
    CHECK(eq_up_to_scalar(a, b));
    CHECK(eq_up_to_scalar(a, a));
    CHECK_FALSE(eq_up_to_scalar(a, mixed));
    CHECK_FALSE(eq_up_to_scalar(a, other));
    CHECK_FALSE(eq_up_to_scalar(a, datum3({{rat(1, 2), "s"}})));
    CHECK_FALSE(a == b);
    CHECK(a == datum3({{rat(1, 3), "s"}, {rat(1), "s^3"}}));
}

TEST_CASE("datum and report serialization round-trip") {
    RamDatum d = datum3({{rat(1, 3), "s"}, {rat(3, 2), "1"}});
    std::string text = ram_datum_json(d);
    CHECK(parse_ram_datum(F3, text) == d);
    CHECK(text.find("\"delta\":\"1/3\"") != std::string::npos);

    std::string rep = report_json(validate_datum(d));
    CHECK(rep.find("\"pass\":true") != std::string::npos);
    CHECK(rep.find("iii.c") != std::string::npos);
}
