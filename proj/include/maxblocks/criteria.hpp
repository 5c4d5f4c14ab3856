#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "maxblocks/eigen_complex.hpp"
#include "maxblocks/snc_model.hpp"

namespace maxblocks {

// Closed-form value of the block counts on an isolated-singularity
// compactification: nu^j = [d == 1][j == 0] for j < n, and in the middle
// degree nu^n = (-1)^n (chi(B) - [d == 1]), where chi(B) is the alternating
// sum of the eigenvalue-complex dimensions (no differentials are needed).
// Returns the full vector over j in [0, n].  Refuses (InputError) when the
// model is not flagged isolated_singularity_compactification: the formula is
// not asserted outside that setting.
std::vector<long> theorem3_nu(const DegenerationModel& model,
                              const TrivializationAtlas& atlas, int d, long a);

// Literal count formula for curves (n = 1, d > 1): the number of pairs
// {i, j} inside the order-d filter realized by an intersection, minus the
// number of filtered components meeting no component outside the filter.
// Intended for models whose eigenvalue complex spans every surviving
// stratum.  When some filtered pair of components meets in several points
// the printed count is unreliable: the op stores a note in *warning (when
// given) and defers to theorem3_nu instead.  Otherwise, if the model carries
// the isolated-singularity flag, the count is cross-checked against
// theorem3_nu and a disagreement raises ConsistencyError.
long curve_nu_03(const DegenerationModel& model, int d,
                 std::string* warning = nullptr);

// Block count at eigenvalue 1 in degree 1 for a curve germ with r local
// branches: r - 1.
long branches_nu_lambda1(long r);

// Vanishing criterion targets: per filtered stratum (conclusion degree by
// degree) or the whole union (conclusion for the complex at once).
enum class Theorem4Scope { per_stratum_i, union_ii };

struct Theorem4Result {
    Theorem4Scope scope = Theorem4Scope::per_stratum_i;
    // Target name with its verdict: true when Hom(H1, Z/d) = 0.
    std::vector<std::pair<std::string, bool>> targets;
    // per_stratum_i only: degree j verdict is the conjunction over the
    // filtered strata of depth j + 1 (vacuously true).  When degree j holds,
    // the eigenvalue complex's degree-j term spans every surviving stratum.
    std::vector<bool> degree_conclusion;
    // union_ii only: when true the full eigenvalue complex equals the nerve
    // complex, so the all-trivial atlas with zero constants is usable.
    bool complex_conclusion = false;
};

// Evaluate the vanishing criterion Hom(H1(target), Z/d) = 0 -- that is,
// b1 = 0 and every invariant factor coprime to d -- over the filtered strata
// (scope per_stratum_i) or the single reserved "union" entry (union_ii).
// Missing h1 data for a required target is an InputError.
Theorem4Result theorem4_check(const DegenerationModel& model, int d,
                              const H1Table& h1, Theorem4Scope scope);

// One weighted arrow of a component correspondence: the stratum `from` of
// the finer space maps to the stratum `to` of the base space.
struct CorrespondenceEntry {
    std::string from;
    std::string to;
    long weight = 0;
};

// Descent data replacing the single model when the total space is singular:
// a base model X0, an optional finer model X1 with an integer-weighted
// correspondence gamma into X0, an optional boundary model D0 with a
// correspondence rho into X0, and trivialization data for each model.
struct HyperresolutionInput {
    DegenerationModel x0;
    std::optional<DegenerationModel> x1;
    std::optional<DegenerationModel> d0;
    std::vector<CorrespondenceEntry> gamma;
    std::vector<CorrespondenceEntry> rho;
    TrivializationAtlas atlas_x0;
    TrivializationAtlas atlas_x1;
    TrivializationAtlas atlas_d0;
};

HyperresolutionInput parse_hyperresolution(const std::string& json_text);
HyperresolutionInput load_hyperresolution_file(const std::string& path);

// Compact-support block count in degree j in [0, n]: the kernel, on H^j of
// the base eigenvalue complex, of the pair of morphisms induced by gamma and
// rho.  Correspondences that do not commute with the differentials raise
// ConsistencyError.
long singular_nu_c(const HyperresolutionInput& input, int d, long a, int j);

// Upper-range value: the count in degree 2n - j is plainly dim H^j of the
// base eigenvalue complex, for j in [0, n].
long singular_nu_c_upper(const HyperresolutionInput& input, int d, long a,
                         int j);

} // namespace maxblocks
