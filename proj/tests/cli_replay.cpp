// Replays golden manifests: runs exact-arithmetic subcommands twice and checks
// byte-identical primary artifacts, plus the exit-code contract.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "polylab/io.hpp"

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void expect(bool ok, const std::string& what)
{
    std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what.c_str());
    if (!ok) ++g_failures;
}

int run(const std::string& bin, const std::string& args, const fs::path& out)
{
    const std::string cmd = bin + " --out " + out.string() + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p)
{
    return polylab::read_text_file(p.string());
}

} // namespace

int main()
{
    const char* bin_env = std::getenv("POLYLAB_BIN");
    if (!bin_env) {
        std::printf("POLYLAB_BIN not set\n");
        return 1;
    }
    const std::string bin = bin_env;
    fs::path base = fs::temp_directory_path() / "polylab_replay";
    fs::remove_all(base);

    struct Golden {
        std::string name;
        std::string args;
        std::string artifact;
    };
    const std::vector<Golden> goldens = {
        {"enum", "enum --model tree --d 2 --L 1 --nmax 5", "enum_tree_d2_L1_n5.json"},
        {"sandwich", "sandwich --d 1 --L 1 --r 3 --nmax 5 --x 1 --p 1/8", "sandwich.json"},
        {"window", "window --d 9 --r 3 --gamma 0.5 --dc 8", "window.json"},
    };

    for (const auto& g : goldens) {
        fs::path a = base / (g.name + "_a");
        fs::path b = base / (g.name + "_b");
        fs::create_directories(a);
        fs::create_directories(b);
        expect(run(bin, g.args, a) == 0, g.name + ": first run exits 0");
        expect(run(bin, g.args, b) == 0, g.name + ": replay exits 0");
        expect(slurp(a / g.artifact) == slurp(b / g.artifact),
               g.name + ": replayed artifact is byte-identical");
        // the manifest records a digest matching the artifact bytes
        const auto manifest = nlohmann::json::parse(
            slurp(a / (g.name + "_manifest.json")));
        expect(manifest.at("outputs").at(g.artifact).get<std::string>() ==
                   polylab::digest_hex(slurp(a / g.artifact)),
               g.name + ": manifest digest matches artifact");
    }

    // diagram pipeline: build a walk field, then evaluate a bubble spec on it
    {
        fs::path dd = base / "diagram";
        fs::create_directories(dd);
        expect(run(bin, "greens --d 2 --L 1 --z 0.6 --N 16", dd) == 0,
               "greens: field artifact written");
        nlohmann::json spec;
        spec["d"] = 2;
        spec["L"] = 1;
        spec["reduce"] = "at_zero";
        spec["factors"] = {{{"kind", "field"}, {"name", "S"}},
                           {{"kind", "field"}, {"name", "S"}}};
        spec["fields"] = {{"S", (dd / "greens_so_d2_z0.6_N16.json").string()}};
        polylab::write_text_file((dd / "bubble.json").string(), spec.dump(2));
        expect(run(bin, "diagram --spec " + (dd / "bubble.json").string(), dd) == 0,
               "diagram: spec file evaluates");
        const auto out = nlohmann::json::parse(slurp(dd / "diagram.json"));
        expect(out.at("value").get<double>() > 1.0, "diagram: bubble value is sensible");
        expect(out.contains("manifest_digest"), "diagram: artifact embeds manifest digest");
    }

    // exit-code contract
    fs::path misc = base / "misc";
    fs::create_directories(misc);
    expect(run(bin, "mass --d 1 --L 1 --z 0.8", misc) == 0, "mass: success exits 0");
    expect(run(bin, "mass --d 1 --L 1 --z 1.5", misc) == 2, "mass: precondition exits 2");
    expect(run(bin, "enum --model tree --d 2 --L 1 --nmax 8 --budget 1000", misc) == 3,
           "enum: budget exhaustion exits 3");
    expect(run(bin, "frobnicate --nope", misc) == 64, "unknown subcommand exits 64");
    expect(run(bin, "enum --model tree --d 2", misc) == 64, "missing flags exit 64");

    std::printf("%s\n", g_failures == 0 ? "cli replay: all ok" : "cli replay: failures");
    return g_failures == 0 ? 0 : 1;
}
