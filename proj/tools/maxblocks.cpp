// Command-line front end: parse inputs, dispatch computations, render
// reports.  Exit status: 0 on success, 1 on input errors, 2 when the input
// data is internally inconsistent (non-square differentials, mismatched
// duality values, non-commuting correspondences).
#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "maxblocks/criteria.hpp"
#include "maxblocks/eigen_complex.hpp"
#include "maxblocks/errors.hpp"
#include "maxblocks/snc_model.hpp"
#include "maxblocks/spectrum.hpp"

namespace {

using namespace maxblocks;

struct RunConfig {
    std::string command;
    std::string model_path; // model file, or descent-input file for singular-nuc
    std::string atlas_path;
    std::string h1_path;
    std::string lambda = "all"; // all | d | d:a
    int degree = 0;
    bool degree_given = false;
    std::string format = "tsv"; // tsv | pretty
    bool shift = false;
    bool assume_bc = false;
    std::string kind = "c"; // complex: c | b
    std::string scope = "i"; // theorem4: i | ii
    int spec_n = 0;
    int spec_d = 0;
    long spec_k = 0;
    bool spec_k_given = false;
    std::string alphas;
    bool alphas_given = false;
    std::string alphas_file;
};

[[noreturn]] void fail(const std::string& message) { throw InputError(message); }

bool pretty(const RunConfig& config) { return config.format == "pretty"; }

// --- eigenvalue selection -------------------------------------------------

struct LambdaSelection {
    bool all = false;
    int d = 1;
    long a = 0;
};

long parse_long_strict(const std::string& text, const std::string& what) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        fail("invalid " + what + " '" + text + "': expected an integer");
    return value;
}

// "all", "d", or "d:a".  When the exponent is omitted it defaults to 0 for
// order 1 and to 1 otherwise.
LambdaSelection parse_lambda(const std::string& text, bool allow_all) {
    LambdaSelection out;
    if (text == "all") {
        if (!allow_all)
            fail("this command needs one eigenvalue order, not --lambda all");
        out.all = true;
        return out;
    }
    size_t colon = text.find(':');
    std::string d_text = text.substr(0, colon);
    out.d = static_cast<int>(
        parse_long_strict(d_text, "eigenvalue selection (order part)"));
    if (colon == std::string::npos) {
        out.a = out.d == 1 ? 0 : 1;
    } else {
        out.a = parse_long_strict(text.substr(colon + 1),
                                  "eigenvalue selection (exponent part)");
    }
    return out;
}

// --- atlas resolution -----------------------------------------------------

std::string sibling_atlas_path(const std::string& model_path) {
    const std::string suffix = ".json";
    if (model_path.size() > suffix.size() &&
        model_path.compare(model_path.size() - suffix.size(), suffix.size(),
                           suffix) == 0)
        return model_path.substr(0, model_path.size() - suffix.size()) +
               ".atlas.json";
    return model_path + ".atlas.json";
}

// Priority: --assume-bc builds the all-trivial atlas for every order of the
// model; an explicit --atlas path is loaded; otherwise a sibling
// "<model>.atlas.json" is picked up when it exists (noted on stderr), and
// the atlas is empty as a last resort (orders with surviving strata then
// report missing data).
TrivializationAtlas resolve_atlas(const RunConfig& config,
                                  const DegenerationModel& model) {
    if (config.assume_bc) {
        TrivializationAtlas atlas;
        for (int d : lambda_orders(model)) {
            if (d == 1) continue;
            TrivializationAtlas one = canonical_full_atlas(model, d);
            for (auto& block : one.blocks)
                atlas.blocks.push_back(std::move(block));
        }
        return atlas;
    }
    if (!config.atlas_path.empty()) return load_atlas_file(config.atlas_path);
    std::string sibling = sibling_atlas_path(config.model_path);
    if (std::filesystem::exists(sibling)) {
        std::cerr << "note: using sibling atlas " << sibling << "\n";
        return load_atlas_file(sibling);
    }
    return {};
}

void note_skipped(const Report& report) {
    for (int d : report.skipped_orders)
        std::cerr << "note: skipped order " << d
                  << " (no atlas data for some exponent)\n";
}

// --- subcommands ------------------------------------------------------------

int cmd_validate(const RunConfig& config) {
    DegenerationModel model = load_model_file(config.model_path);
    TrivializationAtlas atlas = resolve_atlas(config, model);
    Report report = build_report(model, atlas);

    std::cout << "model: OK\n";
    std::cout << "n: " << model.n << "\n";
    std::cout << "vertical: " << model.vertical.size() << "\n";
    std::cout << "horizontal: " << model.horizontal.size() << "\n";
    std::cout << "strata: " << model.strata.size() << "\n";
    std::cout << "orders:";
    for (int d : lambda_orders(model)) std::cout << " " << d;
    std::cout << "\n";
    std::cout << "atlas blocks: " << atlas.blocks.size() << "\n";
    std::cout << "report rows: " << report.rows.size() << "\n";
    std::cout << "skipped orders:";
    if (report.skipped_orders.empty())
        std::cout << " none";
    else
        for (int d : report.skipped_orders) std::cout << " " << d;
    std::cout << "\n";
    return 0;
}

int cmd_orders(const RunConfig& config) {
    DegenerationModel model = load_model_file(config.model_path);
    for (int d : lambda_orders(model)) std::cout << d << "\n";
    return 0;
}

int cmd_complex(const RunConfig& config) {
    DegenerationModel model = load_model_file(config.model_path);
    LambdaSelection sel = parse_lambda(config.lambda, false);
    CechComplex complex;
    if (config.kind == "b") {
        TrivializationAtlas atlas = resolve_atlas(config, model);
        complex = build_b_complex(model, sel.d, atlas, sel.a);
    } else {
        complex = build_c_complex(model, sel.d);
    }
    if (pretty(config)) {
        std::cout << "dims:";
        for (size_t j = 0; j < complex.complex.dims.size(); ++j)
            std::cout << (j ? ", " : " ") << complex.complex.dims[j];
        std::cout << "\n";
    } else {
        for (size_t j = 0; j < complex.complex.dims.size(); ++j)
            std::cout << j << "\t" << complex.complex.dims[j] << "\n";
    }
    return 0;
}

// Shared by nu and nuc; `compact_support` selects the column.
int cmd_counts(const RunConfig& config, bool compact_support) {
    DegenerationModel model = load_model_file(config.model_path);
    TrivializationAtlas atlas = resolve_atlas(config, model);
    if (pretty(config))
        std::cout << "d\ta\tj\t" << (compact_support ? "nu_c" : "nu") << "\n";
    LambdaSelection sel = parse_lambda(config.lambda, true);
    if (sel.all) {
        Report report = build_report(model, atlas);
        note_skipped(report);
        for (const ReportRow& row : report.rows) {
            if (config.degree_given && row.j != config.degree) continue;
            std::cout << row.d << "\t" << row.a << "\t" << row.j << "\t"
                      << (compact_support ? row.nu_c : row.nu) << "\n";
        }
        return 0;
    }
    std::vector<int> degrees;
    if (config.degree_given)
        degrees.push_back(config.degree);
    else
        for (int j = 0; j <= 2 * model.n; ++j) degrees.push_back(j);
    for (int j : degrees) {
        long value = compact_support
                         ? nu_c_extended(model, atlas, sel.d, sel.a, j)
                         : nu_extended(model, atlas, sel.d, sel.a, j);
        std::cout << sel.d << "\t" << sel.a << "\t" << j << "\t" << value
                  << "\n";
    }
    return 0;
}

int cmd_report(const RunConfig& config) {
    DegenerationModel model = load_model_file(config.model_path);
    TrivializationAtlas atlas = resolve_atlas(config, model);
    Report report = build_report(model, atlas);
    note_skipped(report);
    if (pretty(config)) std::cout << "d\ta\tj\tnu\tnu_c\tvia\n";
    for (const ReportRow& row : report.rows)
        std::cout << row.d << "\t" << row.a << "\t" << row.j << "\t" << row.nu
                  << "\t" << row.nu_c << "\t" << row.source << "\n";
    return 0;
}

int cmd_theorem3(const RunConfig& config) {
    DegenerationModel model = load_model_file(config.model_path);
    TrivializationAtlas atlas = resolve_atlas(config, model);
    LambdaSelection sel = parse_lambda(config.lambda, false);
    std::vector<long> values = theorem3_nu(model, atlas, sel.d, sel.a);
    for (size_t j = 0; j < values.size(); ++j) {
        if (pretty(config))
            std::cout << "nu^" << j << ": " << values[j] << "\n";
        else
            std::cout << j << "\t" << values[j] << "\n";
    }
    return 0;
}

int cmd_theorem4(const RunConfig& config) {
    DegenerationModel model = load_model_file(config.model_path);
    H1Table h1 = load_h1_file(config.h1_path);
    LambdaSelection sel = parse_lambda(config.lambda, false);
    Theorem4Scope scope = config.scope == "ii" ? Theorem4Scope::union_ii
                                               : Theorem4Scope::per_stratum_i;
    Theorem4Result result = theorem4_check(model, sel.d, h1, scope);
    auto verdict = [&](bool value) {
        return pretty(config) ? (value ? "yes" : "no") : (value ? "1" : "0");
    };
    for (const auto& [id, vanishes] : result.targets)
        std::cout << "target\t" << id << "\t" << verdict(vanishes) << "\n";
    if (scope == Theorem4Scope::per_stratum_i) {
        for (size_t j = 0; j < result.degree_conclusion.size(); ++j)
            std::cout << "degree\t" << j << "\t"
                      << verdict(result.degree_conclusion[j]) << "\n";
    } else {
        std::cout << "complex\t" << verdict(result.complex_conclusion) << "\n";
    }
    return 0;
}

int cmd_curve03(const RunConfig& config) {
    DegenerationModel model = load_model_file(config.model_path);
    LambdaSelection sel = parse_lambda(config.lambda, false);
    std::string warning;
    long value = curve_nu_03(model, sel.d, &warning);
    if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
    if (pretty(config))
        std::cout << "nu^1 at order " << sel.d << ": " << value << "\n";
    else
        std::cout << value << "\n";
    return 0;
}

int cmd_singular_nuc(const RunConfig& config) {
    HyperresolutionInput input = load_hyperresolution_file(config.model_path);
    LambdaSelection sel = parse_lambda(config.lambda, false);
    std::vector<int> degrees;
    if (config.degree_given)
        degrees.push_back(config.degree);
    else
        for (int j = 0; j <= input.x0.n; ++j) degrees.push_back(j);
    if (pretty(config)) std::cout << "j\tnu_c\tnu_c at 2n-j\n";
    for (int j : degrees)
        std::cout << j << "\t" << singular_nu_c(input, sel.d, sel.a, j) << "\t"
                  << singular_nu_c_upper(input, sel.d, sel.a, j) << "\n";
    return 0;
}

int cmd_spectrum(const RunConfig& config) {
    ExponentData exponents;
    if (config.alphas_given)
        exponents = parse_exponent_list(config.alphas);
    else if (!config.alphas_file.empty())
        exponents = load_exponents_file(config.alphas_file);
    SpectrumPoly poly =
        config.spec_k_given
            ? spectrum_yomdin(config.spec_n, config.spec_d, config.spec_k,
                              exponents)
            : spectrum_homogeneous(config.spec_n, config.spec_d, exponents);
    if (config.shift) {
        // The alternative normalization differs by one: emit t^{alpha - 1}.
        SpectrumPoly shifted;
        for (const auto& [exponent, multiplicity] : poly.terms)
            shifted.add_term(exponent - 1, multiplicity);
        poly = shifted;
    }
    if (pretty(config)) std::cout << "exponent\tmultiplicity\n";
    for (const auto& [exponent, multiplicity] : poly.terms)
        std::cout << exponent.get_str() << "\t" << multiplicity << "\n";
    return 0;
}

int run(const RunConfig& config) {
    if (config.command == "validate") return cmd_validate(config);
    if (config.command == "orders") return cmd_orders(config);
    if (config.command == "complex") return cmd_complex(config);
    if (config.command == "nu") return cmd_counts(config, false);
    if (config.command == "nuc") return cmd_counts(config, true);
    if (config.command == "report") return cmd_report(config);
    if (config.command == "theorem3") return cmd_theorem3(config);
    if (config.command == "theorem4") return cmd_theorem4(config);
    if (config.command == "curve03") return cmd_curve03(config);
    if (config.command == "singular-nuc") return cmd_singular_nuc(config);
    if (config.command == "spectrum") return cmd_spectrum(config);
    fail("unknown command '" + config.command + "'");
}

void add_format_option(CLI::App* sub, RunConfig& config) {
    sub->add_option("--format", config.format, "Output format")
        ->check(CLI::IsMember({"tsv", "pretty"}));
}

void add_atlas_options(CLI::App* sub, RunConfig& config) {
    CLI::Option* atlas =
        sub->add_option("--atlas", config.atlas_path, "Trivialization atlas file");
    sub->add_flag("--assume-bc", config.assume_bc,
                  "Use the all-trivial atlas with zero comparison constants "
                  "for every order (valid when the eigenvalue complex spans "
                  "every surviving stratum)")
        ->excludes(atlas);
}

} // namespace

int main(int argc, char** argv) {
    RunConfig config;
    CLI::App app{"Jordan-block counts of local monodromies from combinatorial "
                 "models of degenerations"};
    app.require_subcommand(1);

    auto model_arg = [&](CLI::App* sub, const char* desc) {
        sub->add_option("model", config.model_path, desc)->required();
    };
    auto lambda_arg = [&](CLI::App* sub, bool required) {
        CLI::Option* opt = sub->add_option(
            "--lambda", config.lambda,
            "Eigenvalue selection: all, an order d, or d:a for one exponent");
        if (required) opt->required();
    };
    auto degree_arg = [&](CLI::App* sub) {
        sub->add_option("--j,--degree", config.degree, "Degree selection")
            ->each([&](const std::string&) { config.degree_given = true; });
    };

    CLI::App* validate = app.add_subcommand("validate", "Model and atlas diagnostics");
    model_arg(validate, "Model file");
    validate->add_option("--atlas", config.atlas_path, "Trivialization atlas file");

    CLI::App* orders = app.add_subcommand("orders", "Eigenvalue orders of the model");
    model_arg(orders, "Model file");

    CLI::App* complex_cmd = app.add_subcommand(
        "complex", "Dimensions of the nerve (c) or eigenvalue (b) complex");
    model_arg(complex_cmd, "Model file");
    lambda_arg(complex_cmd, true);
    complex_cmd->add_option("--kind", config.kind, "Complex kind: c or b")
        ->check(CLI::IsMember({"c", "b"}));
    add_atlas_options(complex_cmd, config);
    add_format_option(complex_cmd, config);

    CLI::App* nu_cmd = app.add_subcommand("nu", "Jordan block counts");
    model_arg(nu_cmd, "Model file");
    lambda_arg(nu_cmd, false);
    degree_arg(nu_cmd);
    add_atlas_options(nu_cmd, config);
    add_format_option(nu_cmd, config);

    CLI::App* nuc_cmd =
        app.add_subcommand("nuc", "Compact-support Jordan block counts");
    model_arg(nuc_cmd, "Model file");
    lambda_arg(nuc_cmd, false);
    degree_arg(nuc_cmd);
    add_atlas_options(nuc_cmd, config);
    add_format_option(nuc_cmd, config);

    CLI::App* report_cmd = app.add_subcommand(
        "report", "Full tabulation over all orders, exponents, and degrees");
    model_arg(report_cmd, "Model file");
    add_atlas_options(report_cmd, config);
    add_format_option(report_cmd, config);

    CLI::App* theorem3_cmd = app.add_subcommand(
        "theorem3", "Closed-form block counts (isolated-singularity "
                    "compactifications only)");
    model_arg(theorem3_cmd, "Model file");
    lambda_arg(theorem3_cmd, true);
    add_atlas_options(theorem3_cmd, config);
    add_format_option(theorem3_cmd, config);

    CLI::App* theorem4_cmd = app.add_subcommand(
        "theorem4", "Vanishing criterion over supplied first homology");
    model_arg(theorem4_cmd, "Model file");
    lambda_arg(theorem4_cmd, true);
    theorem4_cmd->add_option("--h1", config.h1_path, "First-homology data file")
        ->required();
    theorem4_cmd->add_option("--scope", config.scope,
                             "i: per filtered stratum; ii: whole union")
        ->check(CLI::IsMember({"i", "ii"}));
    add_format_option(theorem4_cmd, config);

    CLI::App* curve03_cmd = app.add_subcommand(
        "curve03", "Literal pair-count block formula for curve models");
    model_arg(curve03_cmd, "Model file");
    lambda_arg(curve03_cmd, true);
    add_format_option(curve03_cmd, config);

    CLI::App* singular_cmd = app.add_subcommand(
        "singular-nuc", "Compact-support counts from descent data");
    singular_cmd->add_option("input", config.model_path, "Descent-data file")
        ->required();
    lambda_arg(singular_cmd, true);
    degree_arg(singular_cmd);
    add_format_option(singular_cmd, config);

    CLI::App* spectrum_cmd = app.add_subcommand(
        "spectrum", "Exact spectrum of a homogeneous polynomial with "
                    "one-dimensional singular locus, or of its series "
                    "deformation when --k is given");
    spectrum_cmd->add_option("--n", config.spec_n, "Ambient dimension n")
        ->required();
    spectrum_cmd->add_option("--d", config.spec_d, "Degree d")->required();
    spectrum_cmd
        ->add_option("--k", config.spec_k,
                     "Series deformation parameter (nonnegative)")
        ->each([&](const std::string&) { config.spec_k_given = true; });
    CLI::Option* alphas_opt =
        spectrum_cmd
            ->add_option("--alphas", config.alphas,
                         "Comma-separated transverse spectral numbers")
            ->each([&](const std::string&) { config.alphas_given = true; });
    spectrum_cmd
        ->add_option("--alphas-file", config.alphas_file,
                     "JSON array of transverse spectral numbers")
        ->excludes(alphas_opt);
    spectrum_cmd->add_flag(
        "--shift", config.shift,
        "Emit the alternative normalization (all exponents lowered by one)");
    add_format_option(spectrum_cmd, config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    config.command = app.get_subcommands().front()->get_name();

    try {
        return run(config);
    } catch (const ConsistencyError& e) {
        std::cerr << "inconsistency: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
