#include "maxblocks/eigen_complex.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>
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

long normalize_exponent(int d, long a) { return ((a % d) + d) % d; }

// Exponents identify eigenvalues exp(2*pi*i*a/d) of exact order d, so they
// must be coprime to d (and 0 exactly when d = 1).
void check_exponent(int d, long a) {
    if (d < 1) fail("eigenvalue order must be at least 1, got " + std::to_string(d));
    long m = normalize_exponent(d, a);
    if (d == 1) return;
    if (m == 0 || std::gcd(static_cast<long>(d), m) != 1)
        fail("exponent " + std::to_string(a) + " is not coprime to the order " +
             std::to_string(d));
}

// Kappa entries keyed by (parent id, child id).
using KappaMap = std::map<std::pair<std::string, std::string>, long>;

struct BlockData {
    std::unordered_set<std::string> trivial;
    KappaMap kappa;
    const AtlasBlock* block = nullptr;
};

// Check a block's ids against the model at its order and build fast lookups.
BlockData resolve_block(const DegenerationModel& model, const AtlasBlock& block) {
    const std::string where = "atlas block for order " + std::to_string(block.d);
    BlockData data;
    data.block = &block;

    auto find_stratum = [&](const std::string& id) -> const StratumComponent* {
        for (const auto& s : model.strata)
            if (s.id == id) return &s;
        for (const auto& h : model.horizontal)
            for (const auto& s : h.strata)
                if (s.id == id) return &s;
        return nullptr;
    };

    for (const auto& id : block.trivial) {
        const StratumComponent* s = find_stratum(id);
        if (s == nullptr)
            fail(where + ": trivialized id '" + id + "' is not a stratum of the model");
        if (!is_lambda_stratum(model, *s, block.d))
            fail(where + ": stratum '" + id +
                 "' does not survive the order-" + std::to_string(block.d) + " filter");
        if (!data.trivial.insert(id).second)
            fail(where + ": stratum '" + id + "' is trivialized twice");
    }

    for (const auto& entry : block.kappa) {
        if (!data.trivial.count(entry.parent))
            fail(where + ": kappa references '" + entry.parent +
                 "' which is not in the trivialized list");
        if (!data.trivial.count(entry.child))
            fail(where + ": kappa references '" + entry.child +
                 "' which is not in the trivialized list");
        const StratumComponent* child = find_stratum(entry.child);
        bool adjacent = false;
        for (const auto& [index, parent_id] : child->parents)
            if (parent_id == entry.parent) { adjacent = true; break; }
        if (!adjacent)
            fail(where + ": kappa pair ('" + entry.parent + "', '" + entry.child +
                 "') is not a parent/child adjacency");
        auto key = std::make_pair(entry.parent, entry.child);
        if (!data.kappa.emplace(key, normalize_exponent(block.d, entry.exp)).second)
            fail(where + ": duplicate kappa entry for parent '" + entry.parent +
                 "' and child '" + entry.child + "'");
    }

    for (const auto& [id, exp] : block.lift_kappa) {
        (void)exp;
        if (!data.trivial.count(id))
            fail(where + ": lift_kappa references '" + id +
                 "' which is not in the trivialized list");
    }
    return data;
}

// Build one complex from a stratum table.  `member` selects the spanning
// strata; `kappa` supplies comparison exponents (nullptr means all zero,
// the nerve-complex situation).  `degrees` fixes the degree range 0..degrees-1.
CechComplex assemble_complex(const std::vector<StratumComponent>& table,
                             const std::unordered_set<std::string>& member,
                             int degrees, int order, int d, long a,
                             ComplexKind kind, const KappaMap* kappa,
                             const std::string& context) {
    CechComplex out;
    out.d = d;
    out.a = a;
    out.kind = kind;
    out.basis.assign(static_cast<size_t>(degrees), {});

    std::unordered_map<std::string, const StratumComponent*> by_id;
    for (const auto& s : table) by_id.emplace(s.id, &s);

    for (const auto& s : table) {
        if (!member.count(s.id)) continue;
        size_t degree = s.I.size() - 1;
        if (degree >= out.basis.size())
            fail(context + ": stratum '" + s.id + "' exceeds the degree range");
        out.basis[degree].push_back(s.id);
    }
    for (auto& ids : out.basis) std::sort(ids.begin(), ids.end());

    std::unordered_map<std::string, int> index_in_degree;
    for (const auto& ids : out.basis)
        for (size_t k = 0; k < ids.size(); ++k)
            index_in_degree[ids[k]] = static_cast<int>(k);

    out.complex.order = order;
    for (const auto& ids : out.basis)
        out.complex.dims.push_back(static_cast<int>(ids.size()));

    for (int j = 0; j + 1 < degrees; ++j) {
        ExactMatrix diff(order, out.complex.dims[j + 1], out.complex.dims[j]);
        for (const auto& child_id : out.basis[j + 1]) {
            const StratumComponent& child = *by_id.at(child_id);
            int row = index_in_degree.at(child_id);
            for (size_t p = 0; p < child.I.size(); ++p) {
                const std::string& dropped = child.I[p];
                const std::string& parent_id = child.parents.at(dropped);
                if (!member.count(parent_id)) continue;
                int col = index_in_degree.at(parent_id);
                long exp = 0;
                if (kappa != nullptr) {
                    auto it = kappa->find(std::make_pair(parent_id, child_id));
                    if (it == kappa->end())
                        fail(context + ": missing kappa entry for parent '" +
                             parent_id + "' and child '" + child_id + "'");
                    exp = it->second;
                }
                CycNum value = CycNum::zeta_pow(order, a * exp);
                if (p % 2 == 1) value = -value;
                diff.at(row, col) = value;
            }
        }
        out.complex.diffs.push_back(std::move(diff));
    }

    // The composite of consecutive differentials must vanish; a violation
    // means the declared comparison constants are mutually inconsistent.
    for (size_t j = 0; j + 1 < out.complex.diffs.size(); ++j) {
        ExactMatrix square = out.complex.diffs[j + 1].mul(out.complex.diffs[j]);
        if (square.is_zero()) continue;
        for (int r = 0; r < square.rows(); ++r)
            for (int c = 0; c < square.cols(); ++c)
                if (!square.at(r, c).is_zero())
                    throw ConsistencyError(
                        context + ": trivialization constants are inconsistent: the "
                        "composite differential from '" + out.basis[j][c] + "' to '" +
                        out.basis[j + 2][r] + "' is nonzero");
    }
    return out;
}

std::unordered_set<std::string> to_set(const std::vector<std::string>& ids) {
    return {ids.begin(), ids.end()};
}

// Intersect a trivialized set with one table's ids.
std::unordered_set<std::string> member_in_table(
    const std::unordered_set<std::string>& trivial,
    const std::vector<StratumComponent>& table) {
    std::unordered_set<std::string> out;
    for (const auto& s : table)
        if (trivial.count(s.id)) out.insert(s.id);
    return out;
}

const HorizontalDivisor& divisor_by_id(const DegenerationModel& model,
                                       const std::string& id) {
    for (const auto& h : model.horizontal)
        if (h.id == id) return h;
    fail("unknown horizontal divisor '" + id + "'");
}

// Shared entry point for the two eigenvalue complexes (ambient / sub-model).
CechComplex build_b_impl(const DegenerationModel& model,
                         const std::vector<StratumComponent>& table,
                         const std::vector<std::string>& all_lambda_ids,
                         int degrees, int d, const TrivializationAtlas& atlas,
                         long a, const std::string& context) {
    check_exponent(d, a);
    long a_norm = normalize_exponent(d, a);
    if (d == 1)
        return assemble_complex(table, to_set(all_lambda_ids), degrees, 1, 1, 0,
                                ComplexKind::B, nullptr, context);
    const AtlasBlock* block = find_block(atlas, d, a_norm);
    if (block == nullptr) {
        if (lambda_strata(model, d).empty()) {
            bool any_sub = false;
            for (const auto& h : model.horizontal)
                if (!lambda_substrata(model, h, d).empty()) any_sub = true;
            if (!any_sub)
                return assemble_complex(table, {}, degrees, d, d, a_norm,
                                        ComplexKind::B, nullptr, context);
        } else if (all_lambda_ids.empty()) {
            // The ambient complex has survivors but this table has none:
            // still the zero complex, no trivialization data needed for it.
            return assemble_complex(table, {}, degrees, d, d, a_norm,
                                    ComplexKind::B, nullptr, context);
        }
        fail("no atlas data for order " + std::to_string(d) + " (exponent " +
             std::to_string(a_norm) + ")");
    }
    BlockData data = resolve_block(model, *block);
    return assemble_complex(table, member_in_table(data.trivial, table), degrees,
                            d, d, a_norm, ComplexKind::B, &data.kappa, context);
}

} // namespace

TrivializationAtlas parse_atlas(const std::string& json_text) {
    ordered_json root = parse_text(json_text);
    require_object(root, "atlas");
    reject_unknown_keys(root, {"blocks"}, "atlas");
    TrivializationAtlas atlas;
    const ordered_json& blocks = require_member(root, "blocks", "atlas");
    require_array(blocks, "atlas.blocks");
    std::set<std::pair<int, long>> seen; // a = -1 encodes the generic block
    for (size_t k = 0; k < blocks.size(); ++k) {
        const std::string path = "atlas.blocks[" + std::to_string(k) + "]";
        const ordered_json& entry = blocks[k];
        require_object(entry, path);
        reject_unknown_keys(entry, {"d", "a", "trivial", "kappa", "lift_kappa"}, path);
        AtlasBlock block;
        long d = require_integer(require_member(entry, "d", path), path + ".d");
        if (d < 1) fail(path + ".d: order must be at least 1");
        block.d = static_cast<int>(d);
        if (entry.contains("a")) {
            long a = require_integer(entry["a"], path + ".a");
            if (a < 0 || a >= d) fail(path + ".a: exponent must lie in [0, d)");
            if (d == 1 ? a != 0 : std::gcd(d, a) != 1)
                fail(path + ".a: exponent must be coprime to the order");
            block.a = a;
        }
        if (entry.contains("trivial")) {
            const ordered_json& trivial = entry["trivial"];
            require_array(trivial, path + ".trivial");
            for (size_t m = 0; m < trivial.size(); ++m)
                block.trivial.push_back(require_string(
                    trivial[m], path + ".trivial[" + std::to_string(m) + "]"));
        }
        if (entry.contains("kappa")) {
            const ordered_json& kappa = entry["kappa"];
            require_array(kappa, path + ".kappa");
            for (size_t m = 0; m < kappa.size(); ++m) {
                const std::string kpath = path + ".kappa[" + std::to_string(m) + "]";
                const ordered_json& kentry = kappa[m];
                require_object(kentry, kpath);
                reject_unknown_keys(kentry, {"parent", "child", "exp"}, kpath);
                KappaEntry e;
                e.parent = require_string(require_member(kentry, "parent", kpath),
                                          kpath + ".parent");
                e.child = require_string(require_member(kentry, "child", kpath),
                                         kpath + ".child");
                if (kentry.contains("exp"))
                    e.exp = require_integer(kentry["exp"], kpath + ".exp");
                block.kappa.push_back(std::move(e));
            }
        }
        if (entry.contains("lift_kappa")) {
            const ordered_json& lk = entry["lift_kappa"];
            require_object(lk, path + ".lift_kappa");
            for (auto it = lk.begin(); it != lk.end(); ++it)
                block.lift_kappa[it.key()] =
                    require_integer(it.value(), path + ".lift_kappa['" + it.key() + "']");
        }
        long key_a = block.a ? *block.a : -1;
        if (!seen.emplace(block.d, key_a).second)
            fail(path + ": duplicate block for order " + std::to_string(block.d));
        atlas.blocks.push_back(std::move(block));
    }
    return atlas;
}

TrivializationAtlas load_atlas_file(const std::string& path) {
    try {
        return parse_atlas(read_text_file(path));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

const AtlasBlock* find_block(const TrivializationAtlas& atlas, int d, long a) {
    for (const auto& block : atlas.blocks)
        if (block.d == d && block.a && *block.a == a) return &block;
    for (const auto& block : atlas.blocks)
        if (block.d == d && !block.a) return &block;
    return nullptr;
}

TrivializationAtlas canonical_full_atlas(const DegenerationModel& model, int d) {
    if (d < 1) fail("eigenvalue order must be at least 1, got " + std::to_string(d));
    AtlasBlock block;
    block.d = d;
    block.trivial = lambda_strata(model, d);
    std::unordered_set<std::string> trivial(block.trivial.begin(), block.trivial.end());
    for (const auto& h : model.horizontal) {
        for (const auto& id : lambda_substrata(model, h, d)) {
            block.trivial.push_back(id);
            trivial.insert(id);
            block.lift_kappa[id] = 0;
        }
    }
    auto add_pairs = [&](const std::vector<StratumComponent>& table) {
        for (const auto& s : table) {
            if (!trivial.count(s.id)) continue;
            for (const auto& [index, parent_id] : s.parents)
                if (trivial.count(parent_id))
                    block.kappa.push_back({parent_id, s.id, 0});
        }
    };
    add_pairs(model.strata);
    for (const auto& h : model.horizontal) add_pairs(h.strata);
    TrivializationAtlas atlas;
    atlas.blocks.push_back(std::move(block));
    return atlas;
}

long conjugate_exponent(int d, long a) {
    long m = normalize_exponent(d, a);
    return m == 0 ? 0 : d - m;
}

CechComplex build_c_complex(const DegenerationModel& model, int d) {
    std::vector<std::string> ids = lambda_strata(model, d);
    CechComplex out =
        assemble_complex(model.strata, to_set(ids), model.n + 1, 1, d, 0,
                         ComplexKind::C, nullptr,
                         "nerve complex at order " + std::to_string(d));
    return out;
}

CechComplex build_b_complex(const DegenerationModel& model, int d,
                            const TrivializationAtlas& atlas, long a) {
    return build_b_impl(model, model.strata, lambda_strata(model, d), model.n + 1,
                        d, atlas, a,
                        "eigenvalue complex at order " + std::to_string(d));
}

CechComplex build_c_subcomplex(const DegenerationModel& model,
                               const HorizontalDivisor& divisor, int d) {
    return assemble_complex(divisor.strata,
                            to_set(lambda_substrata(model, divisor, d)),
                            model.n + 1, 1, d, 0, ComplexKind::C, nullptr,
                            "nerve complex of divisor '" + divisor.id + "'");
}

CechComplex build_b_subcomplex(const DegenerationModel& model,
                               const HorizontalDivisor& divisor, int d,
                               const TrivializationAtlas& atlas, long a) {
    return build_b_impl(model, divisor.strata, lambda_substrata(model, divisor, d),
                        model.n + 1, d, atlas, a,
                        "eigenvalue complex of divisor '" + divisor.id + "'");
}

std::vector<ExactMatrix> restriction_morphism(const DegenerationModel& model,
                                              const std::string& divisor_id,
                                              int d,
                                              const TrivializationAtlas& atlas,
                                              long a, ComplexKind kind) {
    const HorizontalDivisor& divisor = divisor_by_id(model, divisor_id);
    CechComplex ambient = kind == ComplexKind::C
                              ? build_c_complex(model, d)
                              : build_b_complex(model, d, atlas, a);
    CechComplex sub = kind == ComplexKind::C
                          ? build_c_subcomplex(model, divisor, d)
                          : build_b_subcomplex(model, divisor, d, atlas, a);

    const AtlasBlock* block =
        (kind == ComplexKind::B && d > 1) ? find_block(atlas, d, normalize_exponent(d, a))
                                          : nullptr;
    long a_norm = normalize_exponent(d, a);

    std::vector<ExactMatrix> out;
    for (size_t j = 0; j < ambient.basis.size(); ++j) {
        ExactMatrix f(ambient.complex.order, sub.complex.dims[j],
                      ambient.complex.dims[j]);
        for (size_t r = 0; r < sub.basis[j].size(); ++r) {
            const std::string& sub_id = sub.basis[j][r];
            const std::string& target = divisor.lift.at(sub_id);
            auto it = std::find(ambient.basis[j].begin(), ambient.basis[j].end(),
                                target);
            if (it == ambient.basis[j].end()) continue;
            int col = static_cast<int>(it - ambient.basis[j].begin());
            long exp = 0;
            if (block != nullptr) {
                auto lk = block->lift_kappa.find(sub_id);
                if (lk != block->lift_kappa.end()) exp = lk->second;
            }
            f.at(static_cast<int>(r), col) =
                CycNum::zeta_pow(ambient.complex.order, a_norm * exp);
        }
        out.push_back(std::move(f));
    }
    return out;
}

long nu(const DegenerationModel& model, const TrivializationAtlas& atlas,
        int d, long a, int j) {
    if (j < 0 || j > model.n)
        fail("degree " + std::to_string(j) + " is outside [0, " +
             std::to_string(model.n) + "]");
    CechComplex b = build_b_complex(model, d, atlas, a);
    return cohomology_dims(b.complex)[static_cast<size_t>(j)];
}

long nu_c(const DegenerationModel& model, const TrivializationAtlas& atlas,
          int d, long a, int j) {
    if (j < 0 || j > model.n)
        fail("degree " + std::to_string(j) + " is outside [0, " +
             std::to_string(model.n) + "]");
    CechComplex ambient = build_b_complex(model, d, atlas, a);
    if (model.horizontal.empty())
        return cohomology_dims(ambient.complex)[static_cast<size_t>(j)];
    bool ambient_zero = true;
    for (int dim : ambient.complex.dims)
        if (dim != 0) ambient_zero = false;
    if (ambient_zero) return 0;

    LinearComplex target;
    target.order = ambient.complex.order;
    target.dims.assign(ambient.complex.dims.size(), 0);
    std::vector<ExactMatrix> morphism;
    bool first = true;
    for (const auto& h : model.horizontal) {
        CechComplex sub = build_b_subcomplex(model, h, d, atlas, a);
        std::vector<ExactMatrix> f =
            restriction_morphism(model, h.id, d, atlas, a, ComplexKind::B);
        for (size_t j2 = 0; j2 < target.dims.size(); ++j2)
            target.dims[j2] += sub.complex.dims[j2];
        if (first) {
            target.diffs = sub.complex.diffs;
            morphism = std::move(f);
            first = false;
        } else {
            for (size_t j2 = 0; j2 < target.diffs.size(); ++j2)
                target.diffs[j2] = block_diag(target.diffs[j2], sub.complex.diffs[j2]);
            for (size_t j2 = 0; j2 < morphism.size(); ++j2)
                morphism[j2] = vstack(morphism[j2], f[j2]);
        }
    }
    return kernel_dim_on_cohomology(ambient.complex, target, morphism, j);
}

long nu_extended(const DegenerationModel& model, const TrivializationAtlas& atlas,
                 int d, long a, int j) {
    if (j < 0 || j > 2 * model.n)
        fail("degree " + std::to_string(j) + " is outside [0, " +
             std::to_string(2 * model.n) + "]");
    if (j <= model.n) return nu(model, atlas, d, a, j);
    return nu_c(model, atlas, d, conjugate_exponent(d, a), 2 * model.n - j);
}

long nu_c_extended(const DegenerationModel& model, const TrivializationAtlas& atlas,
                   int d, long a, int j) {
    if (j < 0 || j > 2 * model.n)
        fail("degree " + std::to_string(j) + " is outside [0, " +
             std::to_string(2 * model.n) + "]");
    if (j <= model.n) return nu_c(model, atlas, d, a, j);
    return nu(model, atlas, d, conjugate_exponent(d, a), 2 * model.n - j);
}

Report build_report(const DegenerationModel& model,
                    const TrivializationAtlas& atlas) {
    Report report;
    for (int d : lambda_orders(model)) {
        std::vector<long> exponents;
        if (d == 1) {
            exponents.push_back(0);
        } else {
            for (long a = 1; a < d; ++a)
                if (std::gcd(static_cast<long>(d), a) == 1) exponents.push_back(a);
        }

        bool needs_data = !lambda_strata(model, d).empty();
        if (!needs_data)
            for (const auto& h : model.horizontal)
                if (!lambda_substrata(model, h, d).empty()) needs_data = true;
        if (d > 1 && needs_data) {
            bool covered = true;
            for (long a : exponents)
                if (find_block(atlas, d, a) == nullptr) covered = false;
            if (!covered) {
                report.skipped_orders.push_back(d);
                continue;
            }
        }

        for (long a : exponents) {
            for (int j = 0; j <= 2 * model.n; ++j) {
                ReportRow row;
                row.d = d;
                row.a = a;
                row.j = j;
                if (j <= model.n) {
                    row.nu = nu(model, atlas, d, a, j);
                    row.nu_c = nu_c(model, atlas, d, a, j);
                    row.source = "computed";
                    if (j == model.n) {
                        long dual = nu_c(model, atlas, d, conjugate_exponent(d, a), j);
                        if (dual != row.nu)
                            throw ConsistencyError(
                                "duality mismatch in middle degree " +
                                std::to_string(j) + " at order " + std::to_string(d) +
                                ", exponent " + std::to_string(a) + ": direct value " +
                                std::to_string(row.nu) + ", dual value " +
                                std::to_string(dual));
                    }
                } else {
                    long conj = conjugate_exponent(d, a);
                    row.nu = nu_c(model, atlas, d, conj, 2 * model.n - j);
                    row.nu_c = nu(model, atlas, d, conj, 2 * model.n - j);
                    row.source = "duality";
                }
                report.rows.push_back(std::move(row));
            }
        }
    }
    return report;
}

} // namespace maxblocks
