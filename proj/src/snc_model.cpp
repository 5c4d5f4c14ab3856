#include "maxblocks/snc_model.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "json_util.hpp"

namespace maxblocks {

namespace {

using jsonutil::fail;
using jsonutil::ordered_json;
using jsonutil::parse_text;
using jsonutil::read_text_file;
using jsonutil::reject_unknown_keys;
using jsonutil::require_array;
using jsonutil::require_bool;
using jsonutil::require_integer;
using jsonutil::require_member;
using jsonutil::require_object;
using jsonutil::require_string;

std::vector<std::string> parse_id_array(const ordered_json& value,
                                        const std::string& path) {
    require_array(value, path);
    std::vector<std::string> out;
    out.reserve(value.size());
    for (size_t k = 0; k < value.size(); ++k)
        out.push_back(require_string(value[k], path + "[" + std::to_string(k) + "]"));
    return out;
}

StratumComponent parse_stratum(const ordered_json& value, const std::string& path) {
    require_object(value, path);
    reject_unknown_keys(value, {"id", "I", "touches", "parents"}, path);
    StratumComponent s;
    s.id = require_string(require_member(value, "id", path), path + ".id");
    s.I = parse_id_array(require_member(value, "I", path), path + ".I");
    if (value.contains("touches"))
        s.touches = parse_id_array(value["touches"], path + ".touches");
    if (value.contains("parents")) {
        const ordered_json& p = value["parents"];
        require_object(p, path + ".parents");
        for (auto it = p.begin(); it != p.end(); ++it)
            s.parents[it.key()] =
                require_string(it.value(), path + ".parents['" + it.key() + "']");
    }
    return s;
}

// Reorder the I list of every stratum to vertical declaration order; ids not
// declared at all keep a stable position at the end for the validator to name.
void normalize_index_order(DegenerationModel& model) {
    std::unordered_map<std::string, size_t> position;
    for (size_t k = 0; k < model.vertical.size(); ++k)
        position.emplace(model.vertical[k].id, k);
    auto normalize = [&](StratumComponent& s) {
        std::stable_sort(s.I.begin(), s.I.end(),
                         [&](const std::string& a, const std::string& b) {
                             auto ia = position.find(a);
                             auto ib = position.find(b);
                             size_t pa = ia == position.end() ? position.size() : ia->second;
                             size_t pb = ib == position.end() ? position.size() : ib->second;
                             return pa < pb;
                         });
    };
    for (auto& s : model.strata) normalize(s);
    for (auto& h : model.horizontal)
        for (auto& s : h.strata) normalize(s);
}

ordered_json stratum_to_json(const StratumComponent& s) {
    ordered_json out;
    out["id"] = s.id;
    out["I"] = s.I;
    out["touches"] = s.touches;
    out["parents"] = ordered_json::object();
    for (const auto& [index, parent] : s.parents) out["parents"][index] = parent;
    return out;
}

// Set inclusion test on id lists (order-independent).
bool subset_of(const std::vector<std::string>& small,
               const std::vector<std::string>& big) {
    std::unordered_set<std::string> bigset(big.begin(), big.end());
    for (const auto& id : small)
        if (!bigset.count(id)) return false;
    return true;
}

bool contains_id(const std::vector<std::string>& ids, const std::string& id) {
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

// Validate one stratum table (the ambient one or a horizontal sub-model).
void validate_stratum_table(const std::vector<StratumComponent>& table,
                            const std::unordered_map<std::string, long>& vertical_mult,
                            size_t max_depth, const std::string& where) {
    std::unordered_map<std::string, const StratumComponent*> by_id;
    for (const auto& s : table) {
        if (s.id.empty()) fail(where + ": stratum with empty id");
        if (!by_id.emplace(s.id, &s).second)
            fail(where + ": duplicate stratum id '" + s.id + "'");
    }
    for (const auto& s : table) {
        const std::string tag = where + ": stratum '" + s.id + "'";
        if (s.I.empty()) fail(tag + ": empty index set I");
        if (s.I.size() > max_depth)
            fail(tag + ": index set of size " + std::to_string(s.I.size()) +
                 " exceeds the maximum depth " + std::to_string(max_depth));
        std::unordered_set<std::string> seen;
        for (const auto& id : s.I) {
            if (!vertical_mult.count(id))
                fail(tag + ": I references undeclared vertical component '" + id + "'");
            if (!seen.insert(id).second)
                fail(tag + ": I repeats vertical component '" + id + "'");
        }
        for (const auto& id : s.touches) {
            if (!vertical_mult.count(id))
                fail(tag + ": touches references undeclared vertical component '" + id + "'");
            if (seen.count(id))
                fail(tag + ": touches overlaps I at vertical component '" + id + "'");
        }
        std::unordered_set<std::string> touch_seen;
        for (const auto& id : s.touches)
            if (!touch_seen.insert(id).second)
                fail(tag + ": touches repeats vertical component '" + id + "'");

        if (s.I.size() == 1) {
            if (!s.parents.empty())
                fail(tag + ": depth-1 strata must not declare parents");
            continue;
        }
        for (const auto& [index, parent_id] : s.parents)
            if (!contains_id(s.I, index))
                fail(tag + ": parents key '" + index + "' is not in I");
        for (const auto& index : s.I) {
            auto pit = s.parents.find(index);
            if (pit == s.parents.end())
                fail(tag + ": missing parent for dropped index '" + index + "'");
            auto target = by_id.find(pit->second);
            if (target == by_id.end())
                fail(tag + ": parent '" + pit->second + "' is not a declared stratum");
            const StratumComponent& parent = *target->second;
            std::vector<std::string> expected;
            for (const auto& id : s.I)
                if (id != index) expected.push_back(id);
            if (parent.I.size() != expected.size() || !subset_of(expected, parent.I))
                fail(tag + ": parent '" + parent.id + "' does not lie over I minus '" +
                     index + "'");
            if (!subset_of(s.touches, parent.touches))
                fail(tag + ": touches are not contained in those of parent '" +
                     parent.id + "'");
            if (!contains_id(parent.touches, index))
                fail(tag + ": dropped index '" + index +
                     "' is not recorded in touches of parent '" + parent.id + "'");
        }
        if (s.I.size() >= 3) {
            for (size_t a = 0; a < s.I.size(); ++a) {
                for (size_t b = a + 1; b < s.I.size(); ++b) {
                    const std::string& i = s.I[a];
                    const std::string& j = s.I[b];
                    const StratumComponent& pi = *by_id.at(s.parents.at(i));
                    const StratumComponent& pj = *by_id.at(s.parents.at(j));
                    auto pij = pi.parents.find(j);
                    auto pji = pj.parents.find(i);
                    if (pij == pi.parents.end() || pji == pj.parents.end())
                        continue; // reported when the parent itself is validated
                    if (pij->second != pji->second)
                        fail(tag + ": parent maps do not commute for indices '" + i +
                             "' and '" + j + "'");
                }
            }
        }
    }
}

} // namespace

DegenerationModel parse_model(const std::string& json_text) {
    ordered_json root = parse_text(json_text);
    require_object(root, "model");
    reject_unknown_keys(root, {"n", "vertical", "strata", "horizontal", "flags"},
                        "model");

    DegenerationModel model;
    long n = require_integer(require_member(root, "n", "model"), "model.n");
    if (n < 0) fail("model.n: must be nonnegative");
    model.n = static_cast<int>(n);

    const ordered_json& vertical = require_member(root, "vertical", "model");
    require_array(vertical, "model.vertical");
    for (size_t k = 0; k < vertical.size(); ++k) {
        const std::string path = "model.vertical[" + std::to_string(k) + "]";
        const ordered_json& entry = vertical[k];
        require_object(entry, path);
        reject_unknown_keys(entry, {"id", "multiplicity"}, path);
        VerticalComponent v;
        v.id = require_string(require_member(entry, "id", path), path + ".id");
        v.multiplicity =
            require_integer(require_member(entry, "multiplicity", path),
                            path + ".multiplicity");
        model.vertical.push_back(std::move(v));
    }

    const ordered_json& strata = require_member(root, "strata", "model");
    require_array(strata, "model.strata");
    for (size_t k = 0; k < strata.size(); ++k)
        model.strata.push_back(
            parse_stratum(strata[k], "model.strata[" + std::to_string(k) + "]"));

    if (root.contains("horizontal")) {
        const ordered_json& horizontal = root["horizontal"];
        require_array(horizontal, "model.horizontal");
        for (size_t k = 0; k < horizontal.size(); ++k) {
            const std::string path = "model.horizontal[" + std::to_string(k) + "]";
            const ordered_json& entry = horizontal[k];
            require_object(entry, path);
            reject_unknown_keys(entry, {"id", "strata", "lift"}, path);
            HorizontalDivisor h;
            h.id = require_string(require_member(entry, "id", path), path + ".id");
            const ordered_json& sub = require_member(entry, "strata", path);
            require_array(sub, path + ".strata");
            for (size_t m = 0; m < sub.size(); ++m)
                h.strata.push_back(
                    parse_stratum(sub[m], path + ".strata[" + std::to_string(m) + "]"));
            const ordered_json& lift = require_member(entry, "lift", path);
            require_object(lift, path + ".lift");
            for (auto it = lift.begin(); it != lift.end(); ++it)
                h.lift[it.key()] =
                    require_string(it.value(), path + ".lift['" + it.key() + "']");
            model.horizontal.push_back(std::move(h));
        }
    }

    if (root.contains("flags")) {
        const ordered_json& flags = root["flags"];
        require_object(flags, "model.flags");
        reject_unknown_keys(flags, {"proper", "isolated_singularity_compactification"},
                            "model.flags");
        if (flags.contains("proper"))
            model.flags.proper = require_bool(flags["proper"], "model.flags.proper");
        if (flags.contains("isolated_singularity_compactification"))
            model.flags.isolated_singularity_compactification =
                require_bool(flags["isolated_singularity_compactification"],
                             "model.flags.isolated_singularity_compactification");
    }

    normalize_index_order(model);
    return model;
}

DegenerationModel load_model_file(const std::string& path) {
    try {
        return parse_model(read_text_file(path));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::string serialize_model(const DegenerationModel& model) {
    ordered_json root;
    root["n"] = model.n;
    root["vertical"] = ordered_json::array();
    for (const auto& v : model.vertical)
        root["vertical"].push_back({{"id", v.id}, {"multiplicity", v.multiplicity}});
    root["strata"] = ordered_json::array();
    for (const auto& s : model.strata) root["strata"].push_back(stratum_to_json(s));
    root["horizontal"] = ordered_json::array();
    for (const auto& h : model.horizontal) {
        ordered_json entry;
        entry["id"] = h.id;
        entry["strata"] = ordered_json::array();
        for (const auto& s : h.strata) entry["strata"].push_back(stratum_to_json(s));
        entry["lift"] = ordered_json::object();
        for (const auto& [sub, ambient] : h.lift) entry["lift"][sub] = ambient;
        root["horizontal"].push_back(std::move(entry));
    }
    root["flags"] = {
        {"proper", model.flags.proper},
        {"isolated_singularity_compactification",
         model.flags.isolated_singularity_compactification}};
    return root.dump(2) + "\n";
}

H1Table parse_h1_table(const std::string& json_text) {
    ordered_json root = parse_text(json_text);
    require_object(root, "h1");
    H1Table table;
    for (auto it = root.begin(); it != root.end(); ++it) {
        const std::string path = "h1['" + it.key() + "']";
        const ordered_json& entry = it.value();
        require_object(entry, path);
        reject_unknown_keys(entry, {"b1", "torsion"}, path);
        FiniteAbelianGroup group;
        if (entry.contains("b1")) {
            group.b1 = require_integer(entry["b1"], path + ".b1");
            if (group.b1 < 0) fail(path + ".b1: must be nonnegative");
        }
        if (entry.contains("torsion")) {
            const ordered_json& torsion = entry["torsion"];
            require_array(torsion, path + ".torsion");
            for (size_t k = 0; k < torsion.size(); ++k) {
                long t = require_integer(torsion[k],
                                         path + ".torsion[" + std::to_string(k) + "]");
                if (t < 2) fail(path + ".torsion: orders must be at least 2");
                if (!group.torsion.empty() && t % group.torsion.back() != 0)
                    fail(path + ".torsion: each order must divide the next");
                group.torsion.push_back(t);
            }
        }
        table[it.key()] = std::move(group);
    }
    return table;
}

H1Table load_h1_file(const std::string& path) {
    try {
        return parse_h1_table(read_text_file(path));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

void validate_model(const DegenerationModel& model) {
    if (model.n < 0) fail("model.n: must be nonnegative");
    if (model.vertical.empty()) fail("model.vertical: at least one component required");

    std::unordered_map<std::string, long> vertical_mult;
    for (const auto& v : model.vertical) {
        if (v.id.empty()) fail("model.vertical: component with empty id");
        if (v.multiplicity < 1)
            fail("vertical component '" + v.id + "': multiplicity must be at least 1");
        if (!vertical_mult.emplace(v.id, v.multiplicity).second)
            fail("duplicate vertical component id '" + v.id + "'");
    }

    std::unordered_set<std::string> all_stratum_ids;
    auto claim_ids = [&](const std::vector<StratumComponent>& table,
                         const std::string& where) {
        for (const auto& s : table) {
            if (s.id.empty()) fail(where + ": stratum with empty id");
            if (!all_stratum_ids.insert(s.id).second)
                fail("stratum id '" + s.id + "' is used more than once");
        }
    };
    claim_ids(model.strata, "model.strata");
    for (const auto& h : model.horizontal)
        claim_ids(h.strata, "horizontal divisor '" + h.id + "'");

    validate_stratum_table(model.strata, vertical_mult,
                           static_cast<size_t>(model.n) + 1, "model");

    // Every vertical component is an n-dimensional variety, so it has points
    // on no other component: a depth-1 stratum must be recorded for it.
    for (const auto& v : model.vertical) {
        bool found = false;
        for (const auto& s : model.strata)
            if (s.I.size() == 1 && s.I[0] == v.id) { found = true; break; }
        if (!found)
            fail("vertical component '" + v.id + "' has no depth-1 stratum");
    }

    std::unordered_map<std::string, const StratumComponent*> ambient_by_id;
    for (const auto& s : model.strata) ambient_by_id.emplace(s.id, &s);

    std::unordered_set<std::string> divisor_ids;
    for (const auto& h : model.horizontal) {
        const std::string where = "horizontal divisor '" + h.id + "'";
        if (h.id.empty()) fail("model.horizontal: divisor with empty id");
        if (!divisor_ids.insert(h.id).second)
            fail("duplicate horizontal divisor id '" + h.id + "'");
        if (model.n < 1)
            fail(where + ": horizontal divisors require n >= 1");
        validate_stratum_table(h.strata, vertical_mult,
                               static_cast<size_t>(model.n), where);

        std::unordered_map<std::string, const StratumComponent*> sub_by_id;
        for (const auto& s : h.strata) sub_by_id.emplace(s.id, &s);
        for (const auto& [sub_id, ambient_id] : h.lift)
            if (!sub_by_id.count(sub_id))
                fail(where + ": lift references unknown sub-stratum '" + sub_id + "'");
        for (const auto& s : h.strata) {
            auto lit = h.lift.find(s.id);
            if (lit == h.lift.end())
                fail(where + ": sub-stratum '" + s.id + "' has no lift");
            auto ait = ambient_by_id.find(lit->second);
            if (ait == ambient_by_id.end())
                fail(where + ": lift of '" + s.id + "' references unknown stratum '" +
                     lit->second + "'");
            const StratumComponent& ambient = *ait->second;
            if (ambient.I.size() != s.I.size() || !subset_of(s.I, ambient.I))
                fail(where + ": lift of '" + s.id + "' changes the index set");
            for (const auto& [index, parent_id] : s.parents) {
                auto plit = h.lift.find(parent_id);
                if (plit == h.lift.end())
                    fail(where + ": sub-stratum '" + parent_id + "' has no lift");
                const std::string& lifted_parent = plit->second;
                auto expected = ambient.parents.find(index);
                if (expected == ambient.parents.end() ||
                    expected->second != lifted_parent)
                    fail(where + ": lift of '" + s.id +
                         "' does not commute with parents at index '" + index + "'");
            }
        }
    }

    if (model.flags.proper != model.horizontal.empty())
        fail(model.flags.proper
                 ? "flags.proper is set but horizontal divisors are present"
                 : "flags.proper is unset but no horizontal divisor is declared");
    if (model.flags.isolated_singularity_compactification && !model.flags.proper)
        fail("flags.isolated_singularity_compactification requires flags.proper");
}

int vertical_position(const DegenerationModel& model, const std::string& id) {
    for (size_t k = 0; k < model.vertical.size(); ++k)
        if (model.vertical[k].id == id) return static_cast<int>(k);
    fail("unknown vertical component '" + id + "'");
}

const VerticalComponent& vertical_by_id(const DegenerationModel& model,
                                        const std::string& id) {
    return model.vertical[static_cast<size_t>(vertical_position(model, id))];
}

const StratumComponent& stratum_by_id(const DegenerationModel& model,
                                      const std::string& id) {
    for (const auto& s : model.strata)
        if (s.id == id) return s;
    for (const auto& h : model.horizontal)
        for (const auto& s : h.strata)
            if (s.id == id) return s;
    fail("unknown stratum '" + id + "'");
}

std::vector<int> lambda_orders(const DegenerationModel& model) {
    std::set<int> orders{1};
    for (const auto& v : model.vertical) {
        for (long k = 1; k * k <= v.multiplicity; ++k) {
            if (v.multiplicity % k != 0) continue;
            orders.insert(static_cast<int>(k));
            orders.insert(static_cast<int>(v.multiplicity / k));
        }
    }
    return {orders.begin(), orders.end()};
}

std::vector<std::string> j_set(const DegenerationModel& model, int d) {
    if (d < 1) fail("eigenvalue order must be at least 1, got " + std::to_string(d));
    std::vector<std::string> out;
    for (const auto& v : model.vertical)
        if (v.multiplicity % d == 0) out.push_back(v.id);
    return out;
}

bool is_lambda_stratum(const DegenerationModel& model,
                       const StratumComponent& stratum, int d) {
    std::vector<std::string> J = j_set(model, d);
    return subset_of(stratum.I, J) && subset_of(stratum.touches, J);
}

std::vector<std::string> lambda_strata(const DegenerationModel& model, int d) {
    std::vector<std::string> out;
    for (const auto& s : model.strata)
        if (is_lambda_stratum(model, s, d)) out.push_back(s.id);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> lambda_substrata(const DegenerationModel& model,
                                          const HorizontalDivisor& divisor,
                                          int d) {
    std::vector<std::string> out;
    for (const auto& s : divisor.strata)
        if (is_lambda_stratum(model, s, d)) out.push_back(s.id);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace maxblocks
