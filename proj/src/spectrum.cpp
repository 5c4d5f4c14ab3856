#include "maxblocks/spectrum.hpp"

#include <cctype>
#include <utility>

#include "json_util.hpp"
#include "maxblocks/errors.hpp"

namespace maxblocks {

namespace {

[[noreturn]] void fail(const std::string& message) { throw InputError(message); }

} // namespace

SpectrumPoly SpectrumPoly::monomial(const Rational& exponent,
                                    long multiplicity) {
    SpectrumPoly out;
    out.add_term(exponent, multiplicity);
    return out;
}

void SpectrumPoly::add_term(const Rational& exponent, long multiplicity) {
    if (multiplicity == 0) return;
    // Map keys must be in lowest terms: GMP's two-argument constructor does
    // not reduce, and unreduced keys would split one exponent across
    // several entries.
    Rational key = exponent;
    key.canonicalize();
    auto [it, inserted] = terms.emplace(std::move(key), multiplicity);
    if (!inserted) {
        it->second += multiplicity;
        if (it->second == 0) terms.erase(it);
    }
}

long SpectrumPoly::multiplicity_at(const Rational& exponent) const {
    Rational key = exponent;
    key.canonicalize();
    auto it = terms.find(key);
    return it == terms.end() ? 0 : it->second;
}

long SpectrumPoly::total_multiplicity() const {
    long total = 0;
    for (const auto& [exponent, multiplicity] : terms) total += multiplicity;
    return total;
}

SpectrumPoly& SpectrumPoly::operator+=(const SpectrumPoly& other) {
    for (const auto& [exponent, multiplicity] : other.terms)
        add_term(exponent, multiplicity);
    return *this;
}

SpectrumPoly& SpectrumPoly::operator-=(const SpectrumPoly& other) {
    for (const auto& [exponent, multiplicity] : other.terms)
        add_term(exponent, -multiplicity);
    return *this;
}

SpectrumPoly operator*(const SpectrumPoly& a, const SpectrumPoly& b) {
    SpectrumPoly out;
    for (const auto& [ea, ma] : a.terms)
        for (const auto& [eb, mb] : b.terms) out.add_term(ea + eb, ma * mb);
    return out;
}

Rational floor_rational(const Rational& value) {
    mpz_class quotient;
    mpz_fdiv_q(quotient.get_mpz_t(), value.get_num().get_mpz_t(),
               value.get_den().get_mpz_t());
    return Rational(quotient);
}

Rational alpha_prime(const Rational& alpha, int d) {
    if (d < 1) fail("the exponent denominator d must be at least 1, got " +
                    std::to_string(d));
    return (floor_rational(alpha * d) + 1) / Rational(d);
}

Rational alpha_dprime(const Rational& alpha, int d, long k) {
    if (d < 1) fail("the exponent denominator d must be at least 1, got " +
                    std::to_string(d));
    if (k < 0) fail("the series parameter k must be nonnegative, got " +
                    std::to_string(k));
    return (Rational(k) * alpha + floor_rational(alpha * d) + 1) /
           Rational(d + k);
}

SpectrumPoly fractional_geometric_sum(int d, int first) {
    if (d < 1) fail("the exponent denominator d must be at least 1, got " +
                    std::to_string(d));
    if (first < 0) fail("the starting index must be nonnegative, got " +
                        std::to_string(first));
    SpectrumPoly out;
    for (int l = first; l < d; ++l) out.add_term(Rational(l, d), 1);
    return out;
}

SpectrumPoly spectrum_homogeneous(int n, int d,
                                  const ExponentData& exponents) {
    if (n < 1) fail("the spectrum formula requires dimension n >= 1, got " +
                    std::to_string(n));
    if (d < 2) fail("the spectrum formula requires degree d >= 2, got " +
                    std::to_string(d));
    SpectrumPoly middle = fractional_geometric_sum(d, 1);
    SpectrumPoly result = middle;
    for (int i = 1; i < n + 1; ++i) result = result * middle;
    SpectrumPoly full = fractional_geometric_sum(d, 0);
    for (const Rational& alpha : exponents)
        result -= SpectrumPoly::monomial(alpha_prime(alpha, d), 1) * full;
    return result;
}

SpectrumPoly spectrum_yomdin(int n, int d, long k,
                             const ExponentData& exponents) {
    if (k < 0) fail("the series parameter k must be nonnegative, got " +
                    std::to_string(k));
    SpectrumPoly result = spectrum_homogeneous(n, d, exponents);
    SpectrumPoly full = fractional_geometric_sum(d + static_cast<int>(k), 0);
    for (const Rational& alpha : exponents)
        result += SpectrumPoly::monomial(alpha_dprime(alpha, d, k), 1) * full;
    return result;
}

Rational parse_rational_token(const std::string& text) {
    size_t begin = 0, end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin])))
        ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1])))
        --end;
    std::string token = text.substr(begin, end - begin);
    if (token.empty()) fail("empty rational token");
    for (char c : token)
        if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/' &&
            c != '-' && c != '+')
            fail("malformed rational token '" + token + "'");
    Rational value;
    if (value.set_str(token, 10) != 0)
        fail("malformed rational token '" + token + "'");
    if (value.get_den() == 0)
        fail("zero denominator in rational token '" + token + "'");
    value.canonicalize();
    return value;
}

ExponentData parse_exponent_list(const std::string& text) {
    ExponentData out;
    if (text.empty()) return out;
    size_t start = 0;
    for (;;) {
        size_t comma = text.find(',', start);
        std::string token = text.substr(
            start, comma == std::string::npos ? std::string::npos
                                              : comma - start);
        out.push_back(parse_rational_token(token));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

ExponentData parse_exponents_json(const std::string& json_text) {
    using jsonutil::parse_text;
    using jsonutil::require_array;
    auto doc = parse_text(json_text);
    require_array(doc, "exponents");
    ExponentData out;
    for (size_t k = 0; k < doc.size(); ++k) {
        const auto& entry = doc[k];
        std::string where = "exponents[" + std::to_string(k) + "]";
        if (entry.is_number_integer())
            out.emplace_back(entry.get<long>());
        else if (entry.is_string())
            out.push_back(parse_rational_token(entry.get<std::string>()));
        else
            fail(where + ": expected an integer or a rational string");
    }
    return out;
}

ExponentData load_exponents_file(const std::string& path) {
    try {
        return parse_exponents_json(jsonutil::read_text_file(path));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

} // namespace maxblocks
