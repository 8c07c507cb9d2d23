#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "sigdt/experiment.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "sigdt_cli_test";

int run(const std::string& args) {
    const std::string cmd = std::string(SIGDT_CLI) + " " + args + " >" + (kRoot / "stdout.txt").string() + " 2>" +
                            (kRoot / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string dir(const std::string& name) { return (kRoot / name).string(); }

struct Fresh {
    Fresh() {
        fs::remove_all(kRoot);
        fs::create_directories(kRoot);
    }
};

const std::string kSmallSynth = "--writers 12 --dims 5 --genuine 10 --skilled 4 --centroid-spread 1.5";

}  // namespace

TEST_CASE("synth output is byte-identical for a fixed seed") {
    Fresh f;
    REQUIRE(run("synth " + kSmallSynth + " --seed 9 --out " + dir("a")) == 0);
    REQUIRE(run("synth " + kSmallSynth + " --seed 9 --out " + dir("b")) == 0);
    REQUIRE(run("synth " + kSmallSynth + " --seed 10 --out " + dir("c")) == 0);
    const auto a = slurp(kRoot / "a" / "features.csv");
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(kRoot / "b" / "features.csv"));
    CHECK(a != slurp(kRoot / "c" / "features.csv"));
    CHECK(fs::exists(kRoot / "a" / "manifest.json"));
}

TEST_CASE("training pipeline through the command line") {
    Fresh f;
    REQUIRE(run("synth " + kSmallSynth + " --exploitation-writers 4 --seed 3 --out " + dir("data")) == 0);
    REQUIRE(run("build-ds --features " + dir("data/development.csv") +
                " --genuines-per-writer 6 --forgery-writers 3 --seed 4 --out " + dir("ds")) == 0);
    REQUIRE(run("condense --input " + dir("ds/dissimilarities.csv") + " --seed 5 --out " + dir("cnn")) == 0);
    REQUIRE(run("train --input " + dir("cnn/condensed.csv") + " --scaler " + dir("cnn/scaler.json") +
                " --gamma 0.125 --out " + dir("model")) == 0);
    REQUIRE(run("ih-report --model " + dir("model/model.json") + " --training " + dir("cnn/condensed.csv") +
                " --features " + dir("data/exploitation.csv") +
                " --references 5 --questioned-genuine 4 --skilled 4 --random 3 --reference-counts 1 5 --out " +
                dir("ih")) == 0);
    const auto text = slurp(kRoot / "ih" / "ih_tables.txt");
    for (const auto* c : {"positive", "negative_random", "negative_skilled"}) CHECK(text.find(c) != std::string::npos);
    CHECK(run("transfer --model " + dir("model/model.json") + " --features " + dir("data/exploitation.csv") +
              " --references 5 --questioned-genuine 4 --skilled 4 --random 3 --reference-counts 1 5 --out " +
              dir("tr")) == 0);
    CHECK(fs::exists(kRoot / "tr" / "transfer.txt"));
}

TEST_CASE("single-class training input fails with a marker") {
    Fresh f;
    write(kRoot / "one.csv",
          "dims=2\n0.1,0.2,positive,genuine,0,1,0,0\n0.3,0.1,positive,genuine,0,2,0,0\n"
          "0.2,0.2,positive,genuine,1,1,1,0\n");
    const int rc = run("train --input " + dir("one.csv") + " --out " + dir("out"));
    CHECK(rc != 0);
    CHECK(fs::exists(kRoot / "out" / "FAILED"));
    CHECK(slurp(kRoot / "stderr.txt").find("single-class input") != std::string::npos);
    CHECK_FALSE(fs::exists(kRoot / "out" / "model.json"));
}

TEST_CASE("exit codes") {
    Fresh f;
    CHECK(run("train --out " + dir("x")) == 2);
    CHECK(run("no-such-command") == 2);
    CHECK(run("build-ds --features " + dir("missing.csv") + " --out " + dir("y")) == 3);
    CHECK(fs::exists(kRoot / "y" / "FAILED"));
}

TEST_CASE("eval writes the report and reproduces from its manifest") {
    Fresh f;
    auto c = sigdt::ExperimentConfig{};
    sigdt::SynthConfig s;
    s.writers = 14;
    s.dims = 6;
    s.genuine = 12;
    s.skilled = 6;
    s.centroid_spread = 1.5;
    c.synth = s;
    c.exploitation_writers = 5;
    c.genuines_per_writer = 6;
    c.random_forgery_writers = 3;
    c.kernel = {0.125, 1.0};
    c.plan = {5, 4, 6, 3, 0, 0};
    c.reference_counts = {1, 3};
    c.replications = 2;
    write(kRoot / "config.json", c.to_json());
    REQUIRE(run("eval --config " + dir("config.json") + " --seed 21 --out " + dir("run1")) == 0);
    const auto report = slurp(kRoot / "run1" / "report.txt");
    CHECK(report.find("Global EER") != std::string::npos);
    CHECK(report.find("condensation") != std::string::npos);
    for (const auto* cat : {"[positive]", "[negative_random]", "[negative_skilled]", "[negative_simple]"})
        CHECK(report.find(cat) != std::string::npos);
    REQUIRE(run("eval --config " + dir("run1/manifest.json") + " --out " + dir("run2")) == 0);
    for (const auto* file : {"report.txt", "eer.tsv", "writers.tsv", "ih_tables.tsv"})
        CHECK(slurp(kRoot / "run1" / file) == slurp(kRoot / "run2" / file));
    fs::remove_all(kRoot);
}
