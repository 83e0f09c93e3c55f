#include <doctest.h>

#ifdef GATEDOC_CLI_PATH

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the tool with stdout captured; stderr goes to a side file.
Run gatedoc(const std::string& args) {
  const auto err = fs::temp_directory_path() / "gatedoc-cli-stderr.txt";
  const std::string cmd = std::string("\"") + GATEDOC_CLI_PATH + "\" " + args + " 2>\"" + err.string() + "\"";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

fs::path workdir() {
  static const fs::path dir = [] {
    const auto d = fs::temp_directory_path() / "gatedoc-cli-tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// A small trained checkpoint shared by the read-only commands.
const fs::path& trained() {
  static const fs::path ckpt = [] {
    const auto d = workdir();
    REQUIRE(gatedoc("synth --documents 120 --out " + q(d / "corpus.jsonl")).code == 0);
    std::ofstream(d / "small.cfg") << "max_epochs = 2\nhidden_dim = 16\ngru_dim = 16\ntoken_dim = 16\n"
                                      "class_hidden_dim = 8\nclass_dim = 8\n";
    const auto r = gatedoc("train --config " + q(d / "small.cfg") + " --data " + q(d / "corpus.jsonl") +
                           " --checkpoint " + q(d / "m.gdoc") + " --out " + q(d / "metrics.jsonl"));
    REQUIRE(r.code == 0);
    return d / "m.gdoc";
  }();
  return ckpt;
}

}  // namespace

TEST_CASE("cli: usage errors exit 1") {
  CHECK(gatedoc("").code == 1);
  CHECK(gatedoc("frobnicate").code == 1);
  CHECK(gatedoc("gradcheck --bogus").code == 1);
  CHECK(gatedoc("--help").code == 0);
  CHECK(gatedoc("train --batch_size 0 --data x.jsonl").code == 1);
  std::ofstream(workdir() / "bad.cfg") << "not_a_key = 3\n";
  CHECK(gatedoc("--config " + q(workdir() / "bad.cfg") + " gradcheck").code == 1);
}

TEST_CASE("cli: gradcheck passes at seed 1") {
  const auto r = gatedoc("gradcheck --seed 1 --out " + q(workdir() / "gc.json"));
  CHECK(r.code == 0);
  const auto report = json::parse(slurp(workdir() / "gc.json"));
  CHECK(report.at("max_relative_error").get<double>() < 1e-4);
}

TEST_CASE("cli: data errors exit 2") {
  CHECK(gatedoc("eval --checkpoint /nonexistent.gdoc --data /nonexistent.jsonl").code == 2);
  std::ofstream(workdir() / "empty.jsonl") << "";
  CHECK(gatedoc("train --data " + q(workdir() / "empty.jsonl")).code == 2);
  std::ofstream(workdir() / "junk.gdoc") << "GDOC but not really";
  CHECK(gatedoc("explain --checkpoint " + q(workdir() / "junk.gdoc") + " --text \"Hi.\"").code == 2);
}

TEST_CASE("cli: train writes metrics and a loadable checkpoint") {
  const auto& ckpt = trained();
  const auto metrics = slurp(workdir() / "metrics.jsonl");
  std::size_t lines = 0;
  for (char c : metrics) lines += c == '\n';
  CHECK(lines == 2);
  const auto eval = gatedoc("eval --checkpoint " + q(ckpt) + " --data " + q(workdir() / "corpus.jsonl") +
                            " --out " + q(workdir() / "eval.json"));
  REQUIRE(eval.code == 0);
  const auto report = json::parse(slurp(workdir() / "eval.json"));
  CHECK(report.at("total").get<int>() == 120);
  CHECK(report == json::parse(eval.out));
}

TEST_CASE("cli: explain writes a heatmap holding every sentence") {
  const std::string text = "Alpha beta gamma. Delta epsilon! Zeta eta theta?";
  const auto html_path = workdir() / "h.html";
  const auto r = gatedoc("explain --checkpoint " + q(trained()) + " --text \"" + text + "\" --out " + q(html_path));
  REQUIRE(r.code == 0);
  const auto html = slurp(html_path);
  for (const char* s : {"Alpha beta gamma.", "Delta epsilon!", "Zeta eta theta?"}) {
    CHECK(html.find(s) != std::string::npos);
    CHECK(html.find(s) == html.rfind(s));
  }
  CHECK(html.find("rgb(0,0,255)") != std::string::npos);
  const auto prediction = json::parse(r.out);
  CHECK(prediction.at("gate_scores").size() == 3);
  CHECK(gatedoc("explain --checkpoint " + q(trained()) + " --text \"   \"").code == 1);
}

TEST_CASE("cli: predict and analyze are reproducible") {
  const auto data = q(workdir() / "corpus.jsonl");
  const auto a = gatedoc("predict --checkpoint " + q(trained()) + " --data " + data);
  const auto b = gatedoc("predict --checkpoint " + q(trained()) + " --data " + data);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(json::parse(a.out).size() == 120);

  const auto analyze = gatedoc("analyze --checkpoint " + q(trained()) + " --data " + data);
  REQUIRE(analyze.code == 0);
  const auto report = json::parse(analyze.out);
  CHECK(report.contains("stddev_report"));
  CHECK(report.contains("error_histogram"));
}

#endif
