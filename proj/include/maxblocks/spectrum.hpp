#pragma once

#include <map>
#include <string>
#include <vector>

#include "maxblocks/cyclotomic.hpp"

namespace maxblocks {

// Finitely supported integer-valued function on rational exponents: the
// formal sum  sum_alpha  m_alpha * t^alpha  with exact rational exponents
// and integer multiplicities.  Kept canonical: no zero-multiplicity terms.
struct SpectrumPoly {
    std::map<Rational, long> terms;

    // m * t^alpha (empty when m == 0).
    static SpectrumPoly monomial(const Rational& exponent, long multiplicity);

    // Adds m * t^alpha, erasing the term if the multiplicity cancels.
    void add_term(const Rational& exponent, long multiplicity);

    long multiplicity_at(const Rational& exponent) const;

    // Sum of all multiplicities (the value at t = 1).
    long total_multiplicity() const;

    bool operator==(const SpectrumPoly&) const = default;

    SpectrumPoly& operator+=(const SpectrumPoly& other);
    SpectrumPoly& operator-=(const SpectrumPoly& other);

    friend SpectrumPoly operator+(SpectrumPoly a, const SpectrumPoly& b) {
        a += b;
        return a;
    }
    friend SpectrumPoly operator-(SpectrumPoly a, const SpectrumPoly& b) {
        a -= b;
        return a;
    }
    friend SpectrumPoly operator*(const SpectrumPoly& a, const SpectrumPoly& b);
};

// Spectral numbers (with multiplicity) of the transverse singularities,
// caller-supplied.
using ExponentData = std::vector<Rational>;

// floor(alpha * d), exactly.
Rational floor_rational(const Rational& value);

// (floor(alpha d) + 1) / d.  Requires d >= 1.
Rational alpha_prime(const Rational& alpha, int d);

// (k alpha + floor(alpha d) + 1) / (d + k).  Requires d >= 1 and k >= 0;
// collapses to alpha_prime at k = 0.
Rational alpha_dprime(const Rational& alpha, int d, long k);

// sum_{l = first}^{d-1} t^{l/d}: the finite expansion of
// (t - t^{first/d}) / (t^{1/d} - 1).  Requires d >= 1 and first >= 0.
SpectrumPoly fractional_geometric_sum(int d, int first);

// Spectrum of a degree-d homogeneous polynomial in n + 1 variables whose
// singular locus is one-dimensional, from the transverse spectral numbers:
//
//   ((t - t^{1/d}) / (t^{1/d} - 1))^{n+1}
//     - sum_j t^{alpha'_j} (t - 1) / (t^{1/d} - 1),
//
// evaluated exactly as finite sums.  Requires n >= 1 and d >= 2.
SpectrumPoly spectrum_homogeneous(int n, int d, const ExponentData& exponents);

// Spectrum of the series deformation f + h^{d+k} (h a generic linear form):
// the homogeneous spectrum plus the correction
//
//   sum_j t^{alpha''_j(k)} (t - 1) / (t^{1/(d+k)} - 1).
//
// Requires k >= 0 (and the homogeneous preconditions).
SpectrumPoly spectrum_yomdin(int n, int d, long k, const ExponentData& exponents);

// --- exponent-list input ------------------------------------------------

// "7", "-2", or "5/6" -> exact rational.  Rejects malformed text and zero
// denominators (InputError).
Rational parse_rational_token(const std::string& text);

// Comma-separated rational tokens; the empty string yields the empty list.
ExponentData parse_exponent_list(const std::string& text);

// JSON array whose elements are integers or rational strings like "5/6".
ExponentData parse_exponents_json(const std::string& json_text);
ExponentData load_exponents_file(const std::string& path);

} // namespace maxblocks
