#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <string>
#include <vector>

#include "maxblocks/errors.hpp"
#include "maxblocks/spectrum.hpp"
#include "milnor_oracle.hpp"

using namespace maxblocks;

namespace {

template <typename Fn>
void check_input_error(Fn&& fn, const std::string& expected_fragment) {
    try {
        fn();
        FAIL("expected InputError containing '" << expected_fragment << "'");
    } catch (const InputError& e) {
        std::string message = e.what();
        INFO("message: " << message);
        CHECK(message.find(expected_fragment) != std::string::npos);
    }
}

Rational frac(long num, long den) {
    Rational value(num, den);
    value.canonicalize();
    return value;
}

SpectrumPoly t_power(long num, long den, long mult = 1) {
    return SpectrumPoly::monomial(frac(num, den), mult);
}

} // namespace

TEST_CASE("spectrum polynomial arithmetic is canonical") {
    SpectrumPoly p = t_power(1, 1) + t_power(1, 2, 3);
    CHECK(p.terms.size() == 2);
    CHECK(p.multiplicity_at(Rational(1)) == 1);
    CHECK(p.multiplicity_at(Rational(1, 2)) == 3);
    CHECK(p.multiplicity_at(Rational(2)) == 0);
    CHECK(p.total_multiplicity() == 4);

    // Cancellation erases the term entirely.
    SpectrumPoly zero = p - p;
    CHECK(zero.terms.empty());
    CHECK(zero == SpectrumPoly{});
    CHECK(SpectrumPoly::monomial(Rational(5), 0).terms.empty());

    // (t + t^{1/2})^2 = t^2 + 2 t^{3/2} + t.
    SpectrumPoly base = t_power(1, 1) + t_power(1, 2);
    SpectrumPoly square = base * base;
    CHECK(square == t_power(2, 1) + t_power(3, 2, 2) + t_power(1, 1));
    // 1/2 + 3/2 and 1 + 1 collide exactly.
    CHECK(square.multiplicity_at(Rational(2)) == 1);
}

TEST_CASE("rounded exponent maps") {
    CHECK(alpha_prime(Rational(1), 3) == Rational(4, 3));
    CHECK(alpha_prime(Rational(1, 2), 2) == Rational(1));
    CHECK(alpha_prime(Rational(5, 6), 6) == Rational(1));

    CHECK(alpha_dprime(Rational(1), 3, 1) == Rational(5, 4));
    for (long k = 1; k <= 9; ++k)
        CHECK(alpha_dprime(Rational(1), 3, k) == Rational(k + 4, k + 3));

    // k = 0 collapses to the first map, over a grid of exponents.
    for (long num = -5; num <= 12; ++num)
        for (long den : {1L, 2L, 3L, 5L, 7L})
            for (int d : {1, 2, 3, 4, 6}) {
                Rational alpha = frac(num, den);
                CHECK(alpha_dprime(alpha, d, 0) == alpha_prime(alpha, d));
                // floor(alpha d) <= alpha d < floor(alpha d) + 1.
                Rational prime = alpha_prime(alpha, d);
                CHECK(alpha < prime);
                CHECK(prime <= alpha + Rational(1, d));
            }

    check_input_error([] { alpha_prime(Rational(1), 0); }, "at least 1");
    check_input_error([] { alpha_dprime(Rational(1), 3, -1); }, "nonnegative");
}

TEST_CASE("finite expansions reproduce their rational functions") {
    for (int d = 1; d <= 9; ++d) {
        // (t^{1/d} - 1) as a polynomial.
        SpectrumPoly denom = t_power(1, d) - t_power(0, 1);
        SpectrumPoly middle = fractional_geometric_sum(d, 1);
        SpectrumPoly full = fractional_geometric_sum(d, 0);
        CHECK(middle * denom == t_power(1, 1) - t_power(1, d));
        CHECK(full * denom == t_power(1, 1) - t_power(0, 1));
        CHECK(full - middle == t_power(0, 1));
    }
    CHECK(fractional_geometric_sum(1, 1).terms.empty());
    check_input_error([] { fractional_geometric_sum(0, 0); }, "at least 1");
    check_input_error([] { fractional_geometric_sum(3, -1); }, "nonnegative");
}

TEST_CASE("homogeneous spectrum") {
    // Three transverse nodes on the triangle of lines: t - 2 t^2.
    SpectrumPoly triangle = spectrum_homogeneous(2, 3, {Rational(1), Rational(1), Rational(1)});
    CHECK(triangle == t_power(1, 1) - t_power(2, 1, 2));

    // Smooth cases collapse to a single power of the middle sum.
    CHECK(spectrum_homogeneous(1, 2, {}) == t_power(1, 1));
    CHECK(spectrum_homogeneous(2, 2, {}) == t_power(3, 2));

    check_input_error([] { spectrum_homogeneous(0, 3, {}); }, "n >= 1");
    check_input_error([] { spectrum_homogeneous(2, 1, {}); }, "d >= 2");
}

TEST_CASE("deformed spectrum matches the closed form for the triangle "
          "family") {
    ExponentData nodes = {Rational(1), Rational(1), Rational(1)};
    for (int p = 4; p <= 12; ++p) {
        SpectrumPoly got = spectrum_yomdin(2, 3, p - 3, nodes);

        SpectrumPoly expected = t_power(1, 1) - t_power(2, 1, 2);
        for (long l = 1; l <= p; ++l)
            expected += SpectrumPoly::monomial(Rational(1) + frac(l, p), 3);
        CHECK(got == expected);

        // Symmetry about (n + 1) / 2 and nonnegativity.
        for (const auto& [exponent, multiplicity] : got.terms) {
            CHECK(multiplicity >= 0);
            CHECK(got.multiplicity_at(Rational(3) - exponent) == multiplicity);
        }

        // Total multiplicity equals the Milnor number, recomputed
        // independently from the Jacobian ideal of xyz + x^p + y^p + z^p.
        long mu = oracles::milnor_number_tppp(p);
        CHECK(got.total_multiplicity() == mu);
        CHECK(mu == 3 * p - 1);
    }
}

TEST_CASE("zero deformation parameter is coherent with the plain formula") {
    std::vector<std::pair<std::pair<int, int>, ExponentData>> cases = {
        {{2, 3}, {Rational(1), Rational(1), Rational(1)}},
        {{2, 4}, {Rational(1, 2), Rational(5, 6), Rational(3, 2)}},
        {{3, 5}, {Rational(7, 3)}},
        {{1, 2}, {}},
    };
    for (const auto& [nd, exponents] : cases) {
        auto [n, d] = nd;
        SpectrumPoly difference =
            spectrum_yomdin(n, d, 0, exponents) - spectrum_homogeneous(n, d, exponents);
        SpectrumPoly expected;
        for (const Rational& alpha : exponents)
            expected += SpectrumPoly::monomial(alpha_prime(alpha, d), 1) *
                        fractional_geometric_sum(d, 0);
        CHECK(difference == expected);
    }
    check_input_error([] { spectrum_yomdin(2, 3, -1, {}); }, "nonnegative");
}

TEST_CASE("exponent-list parsing") {
    CHECK(parse_rational_token("7") == Rational(7));
    CHECK(parse_rational_token("-2") == Rational(-2));
    CHECK(parse_rational_token(" 5/6 ") == Rational(5, 6));
    CHECK(parse_rational_token("4/6") == Rational(2, 3));
    CHECK(parse_rational_token("-7/3") == Rational(-7, 3));

    ExponentData list = parse_exponent_list("1, 1/2,-3/4");
    REQUIRE(list.size() == 3);
    CHECK(list[0] == Rational(1));
    CHECK(list[1] == Rational(1, 2));
    CHECK(list[2] == Rational(-3, 4));
    CHECK(parse_exponent_list("").empty());

    check_input_error([] { parse_rational_token(""); }, "empty");
    check_input_error([] { parse_rational_token("x"); }, "malformed");
    check_input_error([] { parse_rational_token("1.5"); }, "malformed");
    check_input_error([] { parse_rational_token("1/0"); }, "zero denominator");
    check_input_error([] { parse_exponent_list("1,,2"); }, "empty");

    ExponentData from_json = parse_exponents_json(R"([1, "5/6", -2])");
    REQUIRE(from_json.size() == 3);
    CHECK(from_json[1] == Rational(5, 6));
    check_input_error([] { parse_exponents_json(R"({"a": 1})"); },
                      "expected an array");
    check_input_error([] { parse_exponents_json(R"([1.5])"); },
                      "integer or a rational string");

    std::string path = "/tmp/maxblocks_test_exponents.json";
    std::ofstream(path) << R"(["1", "1", 1])";
    ExponentData from_file = load_exponents_file(path);
    CHECK(from_file == ExponentData(3, Rational(1)));
    check_input_error([] { load_exponents_file("/nonexistent/exps.json"); },
                      "cannot read file");
}
