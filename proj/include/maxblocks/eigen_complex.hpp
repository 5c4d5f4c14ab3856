#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maxblocks/cyclotomic.hpp"
#include "maxblocks/snc_model.hpp"

namespace maxblocks {

// One trivialization constant: the unfolding covering over `child`, compared
// through the covering over its parent `parent`, differs by the deck
// transformation with this exponent.
struct KappaEntry {
    std::string parent;
    std::string child;
    long exp = 0;
};

// Trivialization data for the unfolding coverings at one eigenvalue order.
// `trivial` lists the strata (ambient or sub-model) over which the covering
// splits completely; `kappa` gives the comparison exponents between adjacent
// trivialized strata; `lift_kappa` twists the restriction to horizontal
// sub-model strata.  A block without `a` applies to every exponent at its
// order; a block with `a` overrides the generic one for that exponent alone.
struct AtlasBlock {
    int d = 1;
    std::optional<long> a;
    std::vector<std::string> trivial;
    std::vector<KappaEntry> kappa;
    std::map<std::string, long> lift_kappa;
};

struct TrivializationAtlas {
    std::vector<AtlasBlock> blocks;
};

TrivializationAtlas parse_atlas(const std::string& json_text);
TrivializationAtlas load_atlas_file(const std::string& path);

// Best-matching block for (d, a): exact (d, a) first, then the generic
// d-block; nullptr when neither exists.
const AtlasBlock* find_block(const TrivializationAtlas& atlas, int d, long a);

// The atlas declaring every order-d filtered stratum (ambient and sub-model)
// trivial with all comparison exponents zero.  This is exactly the situation
// at d = 1, and what the --assume-bc convenience flag requests at general d.
TrivializationAtlas canonical_full_atlas(const DegenerationModel& model, int d);

// The conjugate exponent: eigenvalue exp(2*pi*i*a/d) goes to its complex
// conjugate.  Zero stays zero (the d = 1 case).
long conjugate_exponent(int d, long a);

enum class ComplexKind { C, B };

// A Cech-style complex indexed by stratum depth: degree j is spanned by the
// surviving strata with |I| = j + 1, listed in `basis[j]` sorted by id.
struct CechComplex {
    int d = 1;
    long a = 0;
    ComplexKind kind = ComplexKind::C;
    std::vector<std::vector<std::string>> basis;
    LinearComplex complex;
};

// Full nerve complex at order d: every filtered stratum contributes, all
// entries are +/-1 over Q.  Permissive in d: an order dividing no
// multiplicity yields the zero complex.
CechComplex build_c_complex(const DegenerationModel& model, int d);

// Eigenvalue complex at order d and exponent a: only strata trivialized by
// the atlas contribute, and each adjacency is weighted by the comparison
// constant zeta_d^(a*kappa).  Throws InputError when required atlas data is
// missing and ConsistencyError when the declared constants do not satisfy
// d o d = 0.
CechComplex build_b_complex(const DegenerationModel& model, int d,
                            const TrivializationAtlas& atlas, long a);

// The same complexes for the special fiber of one horizontal divisor,
// padded with zero degrees so the degree range matches the ambient one.
CechComplex build_c_subcomplex(const DegenerationModel& model,
                               const HorizontalDivisor& divisor, int d);
CechComplex build_b_subcomplex(const DegenerationModel& model,
                               const HorizontalDivisor& divisor, int d,
                               const TrivializationAtlas& atlas, long a);

// Per-degree matrices of the restriction from the ambient complex to the
// divisor's, aligned with the bases of the two complexes above.
std::vector<ExactMatrix> restriction_morphism(const DegenerationModel& model,
                                              const std::string& divisor_id,
                                              int d,
                                              const TrivializationAtlas& atlas,
                                              long a, ComplexKind kind);

// Number of maximal Jordan blocks contributed in degree j at eigenvalue
// exp(2*pi*i*a/d): the dimension of H^j of the eigenvalue complex.
// Requires 0 <= j <= n.
long nu(const DegenerationModel& model, const TrivializationAtlas& atlas,
        int d, long a, int j);

// Compact-support counterpart: the kernel, on H^j of the ambient eigenvalue
// complex, of the stacked restrictions to all horizontal divisors.  Equals
// nu for proper models.
long nu_c(const DegenerationModel& model, const TrivializationAtlas& atlas,
          int d, long a, int j);

// Degree-extended values: degrees in (n, 2n] are filled in through the
// duality nu^j(a) = nu_c^(2n-j)(conj a) and nu_c^j(a) = nu^(2n-j)(conj a).
long nu_extended(const DegenerationModel& model, const TrivializationAtlas& atlas,
                 int d, long a, int j);
long nu_c_extended(const DegenerationModel& model, const TrivializationAtlas& atlas,
                   int d, long a, int j);

// One line of the full tabulation.  `source` is "computed" for degrees
// obtained from a complex and "duality" for degrees filled in by the pairing.
struct ReportRow {
    int d = 1;
    long a = 0;
    int j = 0;
    long nu = 0;
    long nu_c = 0;
    std::string source;
};

struct Report {
    std::vector<ReportRow> rows;
    // Orders with surviving strata but no atlas data; nothing is reported
    // for them rather than reporting something unsupported.
    std::vector<int> skipped_orders;
};

// Tabulate nu and nu_c for every eigenvalue order of the model, all
// exponents coprime to the order, and all degrees 0..2n.  Orders whose
// filtered stratum set is empty need no atlas data (their rows are zero);
// order 1 uses the canonical atlas.  At degree n the computed and duality
// values must agree, and a mismatch raises ConsistencyError.
Report build_report(const DegenerationModel& model,
                    const TrivializationAtlas& atlas);

} // namespace maxblocks
