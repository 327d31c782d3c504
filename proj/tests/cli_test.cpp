#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#ifndef DBOWSUM_CLI_PATH
#error "DBOWSUM_CLI_PATH must point at the dbowsum binary"
#endif

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(DBOWSUM_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {};
  RunResult result;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) result.output.append(buf, n);
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = fs::temp_directory_path() /
            ("dbowsum_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(root_);

    const fs::path corpus = root_ / "corpus";
    write_file(corpus / "setA" / "a1.txt",
               "Solar panels convert sunlight into cheap power. Battery storage smooths "
               "the evening peak. Panel prices keep falling.");
    write_file(corpus / "setA" / "a2.txt",
               "Cheap solar power reshapes the grid. Storage batteries hold the surplus. "
               "Prices keep falling every year.");
    write_file(corpus / "setA" / "refs" / "r1.txt",
               "Solar power gets cheaper and storage smooths the grid.");
    write_file(corpus / "setB" / "b1.txt",
               "Sourdough bread needs a lively starter. Bakers feed the starter with "
               "flour and water. Long proofing builds flavor.");
    write_file(corpus / "setB" / "b2.txt",
               "A lively starter makes airy bread. Flour and water feed the culture. "
               "Flavor comes from long proofing.");
    write_file(corpus / "setB" / "refs" / "r1.txt",
               "Lively starters and long proofing make flavorful bread.");

    write_file(root_ / "norefs" / "setC" / "c1.txt",
               "Comets carry ancient ice. Their tails point away from the sun. "
               "Ancient ice tells the story.");

    write_file(root_ / "rare" / "setR" / "r1.txt",
               "Plum fig date kiwi pear. Mango guava plum.");
  }

  static void TearDownTestSuite() { fs::remove_all(root_); }

  static std::string corpus() { return (root_ / "corpus").string(); }

  static fs::path root_;
};

fs::path CliTest::root_;

constexpr const char* kTinyTrain =
    " --dim 8 --epochs 2 --min-count 1 --subsample 1.0 --seed 3 --workers 1";

}  // namespace

TEST_F(CliTest, HelpExitsZero) {
  const RunResult r = run_cli("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.output.find("build-vocab"), std::string::npos);
  EXPECT_NE(r.output.find("summarize"), std::string::npos);
  EXPECT_NE(r.output.find("grid"), std::string::npos);
}

TEST_F(CliTest, NoSubcommandIsAUserError) {
  const RunResult r = run_cli("");
  EXPECT_EQ(r.code, 1);
}

TEST_F(CliTest, BuildVocabWritesFile) {
  const std::string out = (root_ / "vocab.txt").string();
  const RunResult r =
      run_cli("build-vocab --corpus " + corpus() + " --out " + out + " --min-count 1");
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("vocab tokens="), std::string::npos);
  ASSERT_TRUE(fs::exists(out));
  const std::vector<std::string> lines = read_lines(out);
  ASSERT_FALSE(lines.empty());
  EXPECT_EQ(lines[0].rfind("DBOWVOCAB 1 ", 0), 0u);
}

TEST_F(CliTest, PipelineSmoke) {
  const std::string model = (root_ / "model.bin").string();
  RunResult r = run_cli("train --corpus " + corpus() + " --model " + model + kTinyTrain);
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("trained docs=4"), std::string::npos);
  ASSERT_TRUE(fs::exists(model));

  const std::string sum_dir = (root_ / "sum_ss").string();
  r = run_cli("summarize --corpus " + corpus() + " --model " + model +
              " --mode ss --theta 0.8 --max-words 40 --out " + sum_dir);
  ASSERT_EQ(r.code, 0) << r.output;
  for (const char* set_id : {"setA", "setB"}) {
    const fs::path file = fs::path(sum_dir) / (std::string(set_id) + ".txt");
    ASSERT_TRUE(fs::exists(file)) << file;
    const std::vector<std::string> lines = read_lines(file);
    ASSERT_GE(lines.size(), 2u);
    EXPECT_EQ(lines[0].rfind("# set=" + std::string(set_id) + " mode=ss", 0), 0u);
  }

  r = run_cli("summarize --corpus " + corpus() + " --model " + model +
              " --mode funky --out " + (root_ / "sum_bad").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("unknown mode: funky"), std::string::npos);

  const std::string eval_out = (root_ / "eval.tsv").string();
  r = run_cli("evaluate --corpus " + corpus() + " --model " + model +
              " --mode basic --out " + eval_out);
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("MEAN\tROUGE-1"), std::string::npos);
  const std::vector<std::string> eval_lines = read_lines(eval_out);
  ASSERT_EQ(eval_lines.size(), 10u);  // header + 2 sets x 3 metrics + 3 MEAN rows
  EXPECT_EQ(eval_lines[0], "set_id\tmetric\tprecision\trecall\tf1");

  const std::string proj_out = (root_ / "proj.tsv").string();
  r = run_cli("project --corpus " + corpus() + " --model " + model + " --out " + proj_out);
  ASSERT_EQ(r.code, 0) << r.output;
  const std::vector<std::string> proj_lines = read_lines(proj_out);
  ASSERT_GE(proj_lines.size(), 2u);
  EXPECT_EQ(proj_lines[0], "set_id\tkind\tx\ty");
  bool saw_summary = false, saw_ref = false, saw_doc = false;
  for (const std::string& line : proj_lines) {
    if (line.find("\tsystem_summary\t") != std::string::npos) saw_summary = true;
    if (line.find("\treference_centroid\t") != std::string::npos) saw_ref = true;
    if (line.find("\tdocument\t") != std::string::npos) saw_doc = true;
  }
  EXPECT_TRUE(saw_doc);
  EXPECT_TRUE(saw_summary);
  EXPECT_TRUE(saw_ref);
}

TEST_F(CliTest, MissingCorpusDirectoryFails) {
  const std::string bogus = (root_ / "no_such_dir").string();
  const RunResult r =
      run_cli("train --corpus " + bogus + " --model " + (root_ / "m.bin").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("not a directory"), std::string::npos);
  EXPECT_NE(r.output.find(bogus), std::string::npos);
}

TEST_F(CliTest, MissingRequiredFlagFails) {
  const RunResult r = run_cli("train --model " + (root_ / "m2.bin").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("missing required flag --corpus"), std::string::npos);
}

TEST_F(CliTest, EvaluateWithoutReferencesNamesTheSet) {
  const std::string norefs = (root_ / "norefs").string();
  const std::string model = (root_ / "norefs_model.bin").string();
  RunResult r = run_cli("train --corpus " + norefs + " --model " + model + kTinyTrain);
  ASSERT_EQ(r.code, 0) << r.output;
  r = run_cli("evaluate --corpus " + norefs + " --model " + model + " --out " +
              (root_ / "norefs_eval.tsv").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("missing references for set: setC"), std::string::npos);
}

TEST_F(CliTest, ConfigFileSuppliesDefaultsAndFlagsOverrideIt) {
  const std::string rare = (root_ / "rare").string();
  const std::string out = (root_ / "rare_vocab.txt").string();

  RunResult r = run_cli("build-vocab --corpus " + rare + " --out " + out);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("empty vocabulary"), std::string::npos);

  const fs::path cfg_loose = root_ / "loose.cfg";
  write_file(cfg_loose, "min-count=1\n");
  r = run_cli("build-vocab --config " + cfg_loose.string() + " --corpus " + rare +
              " --out " + out);
  EXPECT_EQ(r.code, 0) << r.output;

  const fs::path cfg_strict = root_ / "strict.cfg";
  write_file(cfg_strict, "min-count=5\n");
  r = run_cli("build-vocab --config " + cfg_strict.string() + " --corpus " + rare +
              " --out " + out);
  EXPECT_EQ(r.code, 1);

  r = run_cli("build-vocab --config " + cfg_strict.string() + " --min-count 1 --corpus " +
              rare + " --out " + out);
  EXPECT_EQ(r.code, 0) << r.output;
}
