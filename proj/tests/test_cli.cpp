#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

// Runs the tool with the given arguments, capturing the selected stream.
CliResult run_cli(const std::string& args, bool capture_stderr = false) {
    std::string command = std::string("'") + MAXBLOCKS_CLI_PATH + "' " + args;
    command += capture_stderr ? " 2>&1 1>/dev/null" : " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    char buffer[4096];
    size_t got;
    while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0)
        result.output.append(buffer, got);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string example(const std::string& name) {
    return std::string(MAXBLOCKS_EXAMPLES_DIR) + "/" + name;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("spectrum subcommand prints the exact triangle spectrum") {
    CliResult r = run_cli("spectrum --n 2 --d 3 --alphas 1,1,1");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "1\t1\n2\t-2\n");

    // Deformed family member p = 5 and the shifted normalization.
    CliResult yomdin = run_cli("spectrum --n 2 --d 3 --k 2 --alphas 1,1,1");
    CHECK(yomdin.exit_code == 0);
    CHECK(yomdin.output ==
          "1\t1\n6/5\t3\n7/5\t3\n8/5\t3\n9/5\t3\n2\t1\n");
    CliResult shifted =
        run_cli("spectrum --n 2 --d 3 --k 2 --alphas 1,1,1 --shift");
    CHECK(shifted.exit_code == 0);
    CHECK(shifted.output ==
          "0\t1\n1/5\t3\n2/5\t3\n3/5\t3\n4/5\t3\n1\t1\n");

    CliResult smooth = run_cli("spectrum --n 2 --d 2");
    CHECK(smooth.exit_code == 0);
    CHECK(smooth.output == "3/2\t1\n");

    CliResult pretty =
        run_cli("spectrum --n 2 --d 3 --alphas 1,1,1 --format pretty");
    CHECK(pretty.output == "exponent\tmultiplicity\n1\t1\n2\t-2\n");
}

TEST_CASE("complex subcommand prints per-degree dimensions") {
    CliResult b = run_cli("complex " + example("ex4_3A.json") +
                          " --lambda 3 --kind b");
    CHECK(b.exit_code == 0);
    CHECK(b.output == "0\t0\n1\t3\n2\t6\n");

    // The sibling atlas pickup is announced on stderr.
    CliResult note = run_cli("complex " + example("ex4_3A.json") +
                             " --lambda 3 --kind b", true);
    CHECK(contains(note.output, "note: using sibling atlas"));

    CliResult c = run_cli("complex " + example("ex4_3A.json") + " --lambda 3");
    CHECK(c.output == "0\t1\n1\t5\n2\t6\n");

    CliResult pretty = run_cli("complex " + example("ex4_3A.json") +
                               " --lambda 3 --kind b --format pretty");
    CHECK(pretty.output == "dims: 0, 3, 6\n");

    // The all-trivial-atlas shortcut reproduces the nerve dimensions.
    CliResult assumed = run_cli("complex " + example("ex4_3A.json") +
                                " --lambda 3 --kind b --assume-bc");
    CHECK(assumed.output == c.output);
}

TEST_CASE("report subcommand tabulates every order and degree") {
    std::string args =
        "report " + example("ex4_1.json") + " --atlas " + example("ex4_1.atlas.json");
    CliResult r = run_cli(args);
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "3\t1\t1\t1\t1\tcomputed\n"));
    CHECK(contains(r.output, "1\t0\t0\t1\t1\tcomputed\n"));
    CHECK(contains(r.output, "3\t2\t2\t0\t0\tduality\n"));
    int lines = 0;
    for (char c : r.output) lines += c == '\n';
    CHECK(lines == 9);

    // Identical inputs produce byte-identical output.
    CliResult again = run_cli(args);
    CHECK(again.output == r.output);

    // Orders with surviving strata but no atlas data are skipped, with a
    // note on stderr.
    CliResult skipped = run_cli("report " + example("ex4_3A.json"), true);
    CHECK(skipped.exit_code == 0);
    CHECK(contains(skipped.output, "note: skipped order 2"));
    CHECK(contains(skipped.output, "note: skipped order 16"));
}

TEST_CASE("orders and validate subcommands") {
    CliResult orders = run_cli("orders " + example("ex4_1.json"));
    CHECK(orders.exit_code == 0);
    CHECK(orders.output == "1\n3\n");

    CliResult v = run_cli("validate " + example("ex4_3A.json"));
    CHECK(v.exit_code == 0);
    CHECK(contains(v.output, "model: OK\n"));
    CHECK(contains(v.output, "n: 2\n"));
    CHECK(contains(v.output, "skipped orders: 2 4 8 16\n"));

    CliResult clean = run_cli("validate " + example("ex4_1.json") +
                              " --atlas " + example("ex4_1.atlas.json"));
    CHECK(contains(clean.output, "skipped orders: none\n"));
}

TEST_CASE("nu and nuc subcommands") {
    CliResult one = run_cli("nu " + example("ex4_1.json") + " --lambda 3:1 --j 1");
    CHECK(one.exit_code == 0);
    CHECK(one.output == "3\t1\t1\t1\n");

    // --lambda all matches the report's nu column.
    CliResult all = run_cli("nu " + example("ex4_1.json"));
    CHECK(all.output ==
          "1\t0\t0\t1\n1\t0\t1\t0\n1\t0\t2\t1\n"
          "3\t1\t0\t0\n3\t1\t1\t1\n3\t1\t2\t0\n"
          "3\t2\t0\t0\n3\t2\t1\t1\n3\t2\t2\t0\n");

    // Compact-support column on the open model: duality fills degree 2.
    CliResult nuc = run_cli("nuc " + example("hz.json") + " --lambda 2:1");
    CHECK(nuc.exit_code == 0);
    CHECK(nuc.output == "2\t1\t0\t0\n2\t1\t1\t0\n2\t1\t2\t1\n");
}

TEST_CASE("criterion subcommands") {
    CliResult t3 = run_cli("theorem3 " + example("ex4_3A.json") + " --lambda 3");
    CHECK(t3.exit_code == 0);
    CHECK(t3.output == "0\t0\n1\t0\n2\t3\n");

    CliResult t3b = run_cli("theorem3 " + example("ex4_3B.json") + " --lambda 3:2");
    CHECK(t3b.output == "0\t0\n1\t0\n2\t2\n");

    CliResult t4 = run_cli("theorem4 " + example("ex4_4_a2.json") +
                           " --lambda 2 --h1 " + example("ex4_4_a2.h1.json"));
    CHECK(t4.exit_code == 0);
    CHECK(t4.output ==
          "target\teE1S1\t1\ntarget\teE1T1\t1\ntarget\tsE1\t1\n"
          "degree\t0\t1\ndegree\t1\t1\n");

    CliResult t4u = run_cli("theorem4 " + example("ex4_4_a2.json") +
                            " --lambda 2 --scope ii --h1 " +
                            example("ex4_4_a2.h1.json"));
    CHECK(t4u.output == "target\tunion\t1\ncomplex\t1\n");

    CliResult c03 = run_cli("curve03 " + example("node.json") + " --lambda 2");
    CHECK(c03.exit_code == 0);
    CHECK(c03.output == "0\n");
    CliResult c03q = run_cli("curve03 " + example("ex4_4_a3.json") + " --lambda 2");
    CHECK(c03q.output == "1\n");

    CliResult sn = run_cli("singular-nuc " + example("hyperres_smooth.json") +
                           " --lambda 2:1");
    CHECK(sn.exit_code == 0);
    CHECK(sn.output == "0\t0\t1\n1\t0\t0\n");
    CliResult sheets = run_cli("singular-nuc " + example("hyperres_sheets.json") +
                               " --lambda 1 --j 0");
    CHECK(sheets.output == "0\t0\t1\n");
}

TEST_CASE("input errors exit 1 with a located diagnostic") {
    CliResult missing = run_cli("orders /nonexistent/model.json", true);
    CHECK(missing.exit_code == 1);
    CHECK(contains(missing.output, "cannot read file"));
    CHECK(contains(missing.output, "/nonexistent/model.json"));

    std::string bad_path = "/tmp/maxblocks_cli_bad.json";
    std::ofstream(bad_path) << "{ not json";
    CliResult malformed = run_cli("orders " + bad_path, true);
    CHECK(malformed.exit_code == 1);
    CHECK(contains(malformed.output, "malformed JSON"));

    CliResult refusal = run_cli("theorem3 " + example("ex4_1.json") + " --lambda 3", true);
    CHECK(refusal.exit_code == 1);
    CHECK(contains(refusal.output, "isolated_singularity_compactification"));

    CliResult bad_lambda =
        run_cli("complex " + example("ex4_1.json") + " --lambda x", true);
    CHECK(bad_lambda.exit_code == 1);
    CHECK(contains(bad_lambda.output, "eigenvalue selection"));

    CliResult all_lambda =
        run_cli("complex " + example("ex4_1.json") + " --lambda all", true);
    CHECK(all_lambda.exit_code == 1);
    CHECK(contains(all_lambda.output, "one eigenvalue order"));

    CliResult no_lambda = run_cli("complex " + example("ex4_1.json"), true);
    CHECK(no_lambda.exit_code == 1);

    CliResult bad_sub = run_cli("frobnicate", true);
    CHECK(bad_sub.exit_code == 1);

    CliResult bad_format =
        run_cli("report " + example("ex4_1.json") + " --format xml", true);
    CHECK(bad_format.exit_code == 1);

    CliResult bad_alpha = run_cli("spectrum --n 2 --d 3 --alphas 1.5", true);
    CHECK(bad_alpha.exit_code == 1);
    CHECK(contains(bad_alpha.output, "malformed rational token"));

    CliResult bad_k = run_cli("spectrum --n 2 --d 3 --k -1", true);
    CHECK(bad_k.exit_code == 1);
    CHECK(contains(bad_k.output, "nonnegative"));

    CliResult conflict = run_cli("report " + example("ex4_1.json") + " --atlas " +
                                 example("ex4_1.atlas.json") + " --assume-bc", true);
    CHECK(conflict.exit_code == 1);
}

TEST_CASE("inconsistent data exits 2") {
    // Twist one comparison constant of the bundled atlas so the squared
    // differential picks up a nonzero composite.
    std::ifstream in(example("ex4_3B.atlas.json"));
    nlohmann::json doc = nlohmann::json::parse(in);
    bool twisted = false;
    for (auto& block : doc["blocks"])
        for (auto& entry : block["kappa"])
            if (entry["parent"] == "p04" && entry["child"] == "t041") {
                entry["exp"] = 1;
                twisted = true;
            }
    REQUIRE(twisted);
    std::string bad_atlas = "/tmp/maxblocks_cli_twisted.atlas.json";
    std::ofstream(bad_atlas) << doc.dump();

    CliResult r = run_cli("complex " + example("ex4_3B.json") +
                          " --lambda 3 --kind b --atlas " + bad_atlas, true);
    CHECK(r.exit_code == 2);
    CHECK(contains(r.output, "inconsistency"));
    CHECK(contains(r.output, "t041"));
}

TEST_CASE("help exits 0") {
    CliResult help = run_cli("--help");
    CHECK(help.exit_code == 0);
    CHECK(contains(help.output, "spectrum"));
}
