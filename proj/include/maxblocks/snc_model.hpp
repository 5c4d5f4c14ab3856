#pragma once

#include <map>
#include <string>
#include <vector>

#include "maxblocks/errors.hpp"

namespace maxblocks {

// One irreducible component of the special fiber, with its multiplicity in
// the divisor of the defining function.
struct VerticalComponent {
    std::string id;
    long multiplicity = 1;
};

// One connected component of an open stratum Y_I^o (the points lying on
// exactly the components listed in I).  `touches` lists the vertical
// components outside I whose closure meets the closure of this component;
// `parents` maps each i in I to the component of Y_{I \ {i}}^o whose closure
// contains this one.
struct StratumComponent {
    std::string id;
    std::vector<std::string> I;       // sorted by vertical declaration order
    std::vector<std::string> touches; // vertical ids only, disjoint from I
    std::map<std::string, std::string> parents;
};

// A horizontal divisor, carried with the stratification of its own special
// fiber and the embedding of those strata into the ambient ones.
struct HorizontalDivisor {
    std::string id;
    std::vector<StratumComponent> strata;
    std::map<std::string, std::string> lift; // sub-stratum id -> ambient stratum id
};

struct ModelFlags {
    // True when the family is proper over the disk; equivalent to having no
    // horizontal divisor in this encoding.
    bool proper = false;
    // True when the model is a good compactification of the Milnor fibration
    // of an isolated hypersurface singularity.  Gates the closed-form
    // Euler-characteristic computations.
    bool isolated_singularity_compactification = false;
};

// Combinatorial model of a one-parameter semistable-type degeneration whose
// special fiber is a simple normal crossing divisor.
struct DegenerationModel {
    int n = 0; // relative dimension: the general fiber has dimension n
    std::vector<VerticalComponent> vertical;
    std::vector<StratumComponent> strata;
    std::vector<HorizontalDivisor> horizontal;
    ModelFlags flags;
};

// Finitely generated abelian group presented as Z^b1 + sum Z/t_k with each
// torsion order dividing the next.
struct FiniteAbelianGroup {
    long b1 = 0;
    std::vector<long> torsion;
};

// First-homology data keyed by stratum id; the reserved key "union" refers
// to the union of all relevant strata rather than a single one.
using H1Table = std::map<std::string, FiniteAbelianGroup>;

// --- parsing / serialization -------------------------------------------------

// Parse a model from JSON text.  Throws InputError on malformed input, with
// the JSON path or offending id in the message.  The I lists of all strata
// are normalized to vertical declaration order.
DegenerationModel parse_model(const std::string& json_text);

// Read and parse a model file.  Throws InputError if the file cannot be read.
DegenerationModel load_model_file(const std::string& path);

// Deterministic JSON rendering; parse(serialize(m)) reproduces m, and
// serialize is byte-stable on already-normalized models.
std::string serialize_model(const DegenerationModel& model);

// Parse an H1 table ({"<stratum-or-union>": {"b1": ..., "torsion": [...]}}).
H1Table parse_h1_table(const std::string& json_text);
H1Table load_h1_file(const std::string& path);

// --- validation ---------------------------------------------------------------

// Check all structural invariants; throws InputError naming the offending
// id on the first violation found.  Invariants include: ids well-formed and
// unique, multiplicities >= 1, I/touches reference declared components and
// are disjoint, every vertical component has a depth-1 stratum, parents are
// total on |I| >= 2 with matching index sets, parent maps commute, touches
// shrink monotonically toward deeper strata with the dropped index recorded
// on the parent, stratum depth is at most n+1 (n for horizontal sub-models),
// lifts preserve I, and the proper flag matches the absence of horizontal
// divisors.
void validate_model(const DegenerationModel& model);

// --- eigenvalue-order combinatorics -------------------------------------------

// Position of a vertical id in declaration order; InputError if unknown.
int vertical_position(const DegenerationModel& model, const std::string& id);

// All orders of eigenvalues of the local monodromies: the sorted union of
// the divisors of the vertical multiplicities.  Always contains 1.
std::vector<int> lambda_orders(const DegenerationModel& model);

// Vertical ids whose multiplicity is divisible by d, in declaration order.
// Throws InputError if d < 1.
std::vector<std::string> j_set(const DegenerationModel& model, int d);

// True when the closure of the stratum lies in the locus where every locally
// relevant multiplicity is divisible by d: I and touches both inside j_set.
bool is_lambda_stratum(const DegenerationModel& model,
                       const StratumComponent& stratum, int d);

// Ids of the ambient strata passing is_lambda_stratum, sorted by id.
std::vector<std::string> lambda_strata(const DegenerationModel& model, int d);

// Same filter applied to the sub-strata of one horizontal divisor.
std::vector<std::string> lambda_substrata(const DegenerationModel& model,
                                          const HorizontalDivisor& divisor,
                                          int d);

// Lookup helpers; InputError when the id is unknown.
const StratumComponent& stratum_by_id(const DegenerationModel& model,
                                      const std::string& id);
const VerticalComponent& vertical_by_id(const DegenerationModel& model,
                                        const std::string& id);

} // namespace maxblocks
