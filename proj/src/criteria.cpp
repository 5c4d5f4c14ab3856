#include "maxblocks/criteria.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <utility>

#include "json_util.hpp"

namespace maxblocks {

namespace {

using jsonutil::fail;
using jsonutil::ordered_json;
using jsonutil::parse_text;
using jsonutil::read_text_file;
using jsonutil::reject_unknown_keys;
using jsonutil::require_array;
using jsonutil::require_integer;
using jsonutil::require_member;
using jsonutil::require_object;
using jsonutil::require_string;

long euler_characteristic(const std::vector<int>& dims) {
    long chi = 0;
    for (size_t j = 0; j < dims.size(); ++j)
        chi += (j % 2 == 0 ? 1 : -1) * static_cast<long>(dims[j]);
    return chi;
}

// Hom(H1, Z/d) = 0: no free part and every invariant factor coprime to d.
bool hom_to_cyclic_vanishes(const FiniteAbelianGroup& h1, int d) {
    if (d == 1) return true;
    if (h1.b1 != 0) return false;
    for (long t : h1.torsion)
        if (std::gcd(t, static_cast<long>(d)) != 1) return false;
    return true;
}

const StratumComponent* find_single(const DegenerationModel& model,
                                    const std::string& vertical_id) {
    for (const auto& s : model.strata)
        if (s.I.size() == 1 && s.I[0] == vertical_id) return &s;
    return nullptr;
}

} // namespace

std::vector<long> theorem3_nu(const DegenerationModel& model,
                              const TrivializationAtlas& atlas, int d, long a) {
    if (!model.flags.isolated_singularity_compactification)
        fail("the closed-form block count applies only to models flagged "
             "isolated_singularity_compactification");
    if (!model.horizontal.empty())
        fail("the closed-form block count requires a model without "
             "horizontal divisors");
    CechComplex b = build_b_complex(model, d, atlas, a);
    long delta = d == 1 ? 1 : 0;
    long chi = euler_characteristic(b.complex.dims);
    std::vector<long> out(static_cast<size_t>(model.n) + 1, 0);
    if (model.n > 0 && delta == 1) out[0] = 1;
    long sign = model.n % 2 == 0 ? 1 : -1;
    out[static_cast<size_t>(model.n)] = sign * (chi - delta);
    return out;
}

long curve_nu_03(const DegenerationModel& model, int d, std::string* warning) {
    if (model.n != 1)
        fail("the literal pair-count formula applies only to curve models "
             "(n = 1)");
    if (d <= 1)
        fail("the literal pair-count formula applies only to orders greater "
             "than 1");
    std::vector<std::string> filter = j_set(model, d);
    std::set<std::string> in_filter(filter.begin(), filter.end());

    std::map<std::pair<std::string, std::string>, int> pair_points;
    for (const auto& s : model.strata) {
        if (s.I.size() != 2) continue;
        if (!in_filter.count(s.I[0]) || !in_filter.count(s.I[1])) continue;
        auto key = std::minmax(s.I[0], s.I[1]);
        ++pair_points[{key.first, key.second}];
    }

    bool several_points = false;
    for (const auto& [pair, count] : pair_points)
        if (count > 1) several_points = true;

    if (several_points) {
        if (warning != nullptr)
            *warning = "a filtered pair of components meets in several "
                       "points; the literal pair count is unreliable here, "
                       "using the Euler-characteristic value instead";
        return theorem3_nu(model, canonical_full_atlas(model, d), d,
                           1)[static_cast<size_t>(model.n)];
    }

    long pairs = static_cast<long>(pair_points.size());
    long inner_components = 0;
    for (const auto& id : filter) {
        const StratumComponent* single = find_single(model, id);
        if (single == nullptr) continue;
        bool meets_outside = false;
        for (const auto& other : single->touches)
            if (!in_filter.count(other)) meets_outside = true;
        if (!meets_outside) ++inner_components;
    }
    long value = pairs - inner_components;

    if (model.flags.isolated_singularity_compactification) {
        long reference = theorem3_nu(model, canonical_full_atlas(model, d), d,
                                     1)[static_cast<size_t>(model.n)];
        if (reference != value)
            throw ConsistencyError(
                "the literal pair count (" + std::to_string(value) +
                ") disagrees with the Euler-characteristic value (" +
                std::to_string(reference) + ") at order " + std::to_string(d));
    }
    return value;
}

long branches_nu_lambda1(long r) {
    if (r < 1) fail("the branch count must be at least 1");
    return r - 1;
}

Theorem4Result theorem4_check(const DegenerationModel& model, int d,
                              const H1Table& h1, Theorem4Scope scope) {
    if (d < 1) fail("eigenvalue order must be at least 1, got " + std::to_string(d));
    Theorem4Result result;
    result.scope = scope;

    if (scope == Theorem4Scope::union_ii) {
        auto it = h1.find("union");
        if (it == h1.end())
            fail("h1 data is missing the reserved 'union' entry required by "
                 "the whole-union criterion");
        bool vanishes = hom_to_cyclic_vanishes(it->second, d);
        result.targets.emplace_back("union", vanishes);
        result.complex_conclusion = vanishes;
        return result;
    }

    result.degree_conclusion.assign(static_cast<size_t>(model.n) + 1, true);
    for (const auto& id : lambda_strata(model, d)) {
        auto it = h1.find(id);
        if (it == h1.end())
            fail("h1 data is missing the filtered stratum '" + id + "'");
        bool vanishes = hom_to_cyclic_vanishes(it->second, d);
        result.targets.emplace_back(id, vanishes);
        size_t degree = stratum_by_id(model, id).I.size() - 1;
        if (!vanishes) result.degree_conclusion[degree] = false;
    }
    return result;
}

namespace {

std::vector<CorrespondenceEntry> parse_correspondence(const ordered_json& node,
                                                      const std::string& path) {
    require_array(node, path);
    std::vector<CorrespondenceEntry> out;
    for (size_t k = 0; k < node.size(); ++k) {
        const std::string where = path + "[" + std::to_string(k) + "]";
        const ordered_json& entry = node[k];
        require_object(entry, where);
        reject_unknown_keys(entry, {"from", "to", "weight"}, where);
        CorrespondenceEntry e;
        e.from = require_string(require_member(entry, "from", where),
                                where + ".from");
        e.to = require_string(require_member(entry, "to", where), where + ".to");
        e.weight = require_integer(require_member(entry, "weight", where),
                                   where + ".weight");
        out.push_back(std::move(e));
    }
    return out;
}

std::optional<DegenerationModel> parse_optional_model(const ordered_json& node,
                                                      const std::string& path) {
    if (node.is_null()) return std::nullopt;
    DegenerationModel model = parse_model(node.dump());
    try {
        validate_model(model);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
    return model;
}

TrivializationAtlas parse_optional_atlas(const ordered_json& node,
                                         bool model_present,
                                         const std::string& path) {
    if (node.is_null()) {
        if (model_present)
            fail(path + ": atlas missing for a model that is present");
        return TrivializationAtlas{};
    }
    if (!model_present)
        fail(path + ": atlas given for a model that is absent");
    try {
        return parse_atlas(node.dump());
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

void check_correspondence_ids(const std::vector<CorrespondenceEntry>& entries,
                              const std::optional<DegenerationModel>& fine,
                              const DegenerationModel& base,
                              const std::string& name) {
    if (!entries.empty() && !fine)
        fail(name + " correspondence given without its source model");
    for (const auto& e : entries) {
        const StratumComponent* from = nullptr;
        for (const auto& s : fine->strata)
            if (s.id == e.from) from = &s;
        if (from == nullptr)
            fail(name + " correspondence: unknown source stratum '" + e.from +
                 "'");
        const StratumComponent* to = nullptr;
        for (const auto& s : base.strata)
            if (s.id == e.to) to = &s;
        if (to == nullptr)
            fail(name + " correspondence: unknown base stratum '" + e.to + "'");
        if (from->I.size() != to->I.size())
            fail(name + " correspondence: '" + e.from + "' (depth " +
                 std::to_string(from->I.size()) + ") cannot map to '" + e.to +
                 "' (depth " + std::to_string(to->I.size()) + ")");
    }
}

// Pad a lower-dimensional complex with zero degrees up to `degrees`.
void pad_complex(CechComplex& c, size_t degrees) {
    while (c.complex.dims.size() < degrees) {
        c.complex.dims.push_back(0);
        c.basis.push_back({});
    }
    while (c.complex.diffs.size() + 1 < degrees) {
        size_t k = c.complex.diffs.size();
        c.complex.diffs.push_back(
            ExactMatrix(c.complex.order, c.complex.dims[k + 1],
                        c.complex.dims[k]));
    }
}

std::vector<ExactMatrix> correspondence_matrices(
    const std::vector<CorrespondenceEntry>& entries, const CechComplex& fine,
    const DegenerationModel& fine_model, const CechComplex& base) {
    std::vector<ExactMatrix> out;
    for (size_t k = 0; k < base.complex.dims.size(); ++k)
        out.push_back(ExactMatrix(base.complex.order, fine.complex.dims[k],
                                  base.complex.dims[k]));
    for (const auto& e : entries) {
        size_t degree = stratum_by_id(fine_model, e.from).I.size() - 1;
        const auto& fine_ids = fine.basis[degree];
        const auto& base_ids = base.basis[degree];
        auto fit = std::find(fine_ids.begin(), fine_ids.end(), e.from);
        auto bit = std::find(base_ids.begin(), base_ids.end(), e.to);
        // Strata outside the surviving bases induce nothing at this order.
        if (fit == fine_ids.end() || bit == base_ids.end()) continue;
        int row = static_cast<int>(fit - fine_ids.begin());
        int col = static_cast<int>(bit - base_ids.begin());
        ExactMatrix& m = out[degree];
        m.at(row, col) = m.at(row, col) +
                         CycNum::from_rational(base.complex.order,
                                               Rational(e.weight));
    }
    return out;
}

} // namespace

HyperresolutionInput parse_hyperresolution(const std::string& json_text) {
    ordered_json root = parse_text(json_text);
    require_object(root, "hyperresolution");
    reject_unknown_keys(root, {"X0", "X1", "D0", "gamma", "rho", "atlases"},
                        "hyperresolution");

    HyperresolutionInput input;
    const ordered_json& x0 = require_member(root, "X0", "hyperresolution");
    input.x0 = parse_model(x0.dump());
    try {
        validate_model(input.x0);
    } catch (const InputError& e) {
        throw InputError(std::string("X0: ") + e.what());
    }
    input.x1 = parse_optional_model(require_member(root, "X1", "hyperresolution"),
                                    "X1");
    input.d0 = parse_optional_model(require_member(root, "D0", "hyperresolution"),
                                    "D0");
    if (input.x1 && input.x1->n > input.x0.n)
        fail("X1 has larger dimension than X0");
    if (input.d0 && input.d0->n > input.x0.n)
        fail("D0 has larger dimension than X0");

    input.gamma = parse_correspondence(
        require_member(root, "gamma", "hyperresolution"), "gamma");
    input.rho = parse_correspondence(
        require_member(root, "rho", "hyperresolution"), "rho");
    check_correspondence_ids(input.gamma, input.x1, input.x0, "gamma");
    check_correspondence_ids(input.rho, input.d0, input.x0, "rho");

    const ordered_json& atlases =
        require_member(root, "atlases", "hyperresolution");
    require_object(atlases, "atlases");
    reject_unknown_keys(atlases, {"X0", "X1", "D0"}, "atlases");
    input.atlas_x0 = parse_optional_atlas(
        require_member(atlases, "X0", "atlases"), true, "atlases.X0");
    input.atlas_x1 = parse_optional_atlas(
        require_member(atlases, "X1", "atlases"), input.x1.has_value(),
        "atlases.X1");
    input.atlas_d0 = parse_optional_atlas(
        require_member(atlases, "D0", "atlases"), input.d0.has_value(),
        "atlases.D0");
    return input;
}

HyperresolutionInput load_hyperresolution_file(const std::string& path) {
    try {
        return parse_hyperresolution(read_text_file(path));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

long singular_nu_c(const HyperresolutionInput& input, int d, long a, int j) {
    if (j < 0 || j > input.x0.n)
        fail("degree " + std::to_string(j) + " is outside [0, " +
             std::to_string(input.x0.n) + "]");
    CechComplex base = build_b_complex(input.x0, d, input.atlas_x0, a);
    size_t degrees = base.complex.dims.size();

    LinearComplex target;
    target.order = base.complex.order;
    target.dims.assign(degrees, 0);
    for (size_t k = 0; k + 1 < degrees; ++k)
        target.diffs.push_back(ExactMatrix(target.order, 0, 0));
    std::vector<ExactMatrix> morphism;
    for (size_t k = 0; k < degrees; ++k)
        morphism.push_back(ExactMatrix(target.order, 0, base.complex.dims[k]));

    auto absorb = [&](const DegenerationModel& fine_model,
                      const TrivializationAtlas& fine_atlas,
                      const std::vector<CorrespondenceEntry>& entries) {
        CechComplex fine = build_b_complex(fine_model, d, fine_atlas, a);
        pad_complex(fine, degrees);
        std::vector<ExactMatrix> f =
            correspondence_matrices(entries, fine, fine_model, base);
        for (size_t k = 0; k < degrees; ++k) {
            target.dims[k] += fine.complex.dims[k];
            morphism[k] = vstack(morphism[k], f[k]);
        }
        for (size_t k = 0; k + 1 < degrees; ++k)
            target.diffs[k] = block_diag(target.diffs[k], fine.complex.diffs[k]);
    };
    if (input.x1) absorb(*input.x1, input.atlas_x1, input.gamma);
    if (input.d0) absorb(*input.d0, input.atlas_d0, input.rho);

    return kernel_dim_on_cohomology(base.complex, target, morphism, j);
}

long singular_nu_c_upper(const HyperresolutionInput& input, int d, long a,
                         int j) {
    if (j < 0 || j > input.x0.n)
        fail("degree " + std::to_string(j) + " is outside [0, " +
             std::to_string(input.x0.n) + "]");
    CechComplex base = build_b_complex(input.x0, d, input.atlas_x0, a);
    return cohomology_dims(base.complex)[static_cast<size_t>(j)];
}

} // namespace maxblocks
