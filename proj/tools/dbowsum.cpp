#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dbowsum/dbowsum.hpp"

namespace {

struct RunConfig {
  std::string corpus;
  std::string model;
  std::string mode = "basic";
  std::string out;
  int dim = 300;
  int window = 8;
  int negatives = 5;
  int epochs = 10;
  double alpha = 0.025;
  int infer_epochs = 50;
  double theta = 0.7;
  int beam_width = 10;
  int max_words = 250;
  int workers = 1;
  std::uint64_t seed = 1;
  int min_count = dbowsum::Vocabulary::kDefaultMinCount;
  double subsample = dbowsum::Vocabulary::kDefaultSubsampleT;
  std::string config;
};

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->option_defaults()->always_capture_default();
  cmd->add_option("--corpus", cfg.corpus, "corpus root: <root>/<set_id>/<doc>.txt");
  cmd->add_option("--model", cfg.model, "model file");
  cmd->add_option("--mode", cfg.mode, "summarizer mode: basic|ss|beam|lead|random");
  cmd->add_option("--dim", cfg.dim, "vector dimension");
  cmd->add_option("--window", cfg.window, "context window (recorded in the model file)");
  cmd->add_option("--negatives", cfg.negatives, "negative samples per pair");
  cmd->add_option("--epochs", cfg.epochs, "training epochs");
  cmd->add_option("--alpha", cfg.alpha, "initial learning rate");
  cmd->add_option("--infer-epochs", cfg.infer_epochs, "inference passes");
  cmd->add_option("--theta", cfg.theta, "redundancy threshold for ss mode");
  cmd->add_option("--beam-width", cfg.beam_width, "beam width for beam mode");
  cmd->add_option("--max-words", cfg.max_words, "summary word budget");
  cmd->add_option("--workers", cfg.workers, "training worker threads");
  cmd->add_option("--seed", cfg.seed, "random seed");
  cmd->add_option("--min-count", cfg.min_count, "vocabulary count threshold");
  cmd->add_option("--subsample", cfg.subsample, "subsampling threshold t");
  cmd->add_option("--out", cfg.out, "output path");
  cmd->add_option("--config", cfg.config, "flat key=value config file; flags override it");
}

// CLI11 only reads config files attached to the root command, so apply a
// per-subcommand file by hand. Flags given on the command line win.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw dbowsum::Error("cannot open config file: " + path);
  const auto trim = [](const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw dbowsum::Error("bad config line " + std::to_string(lineno) + ": " + stripped);
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr) throw dbowsum::Error("unknown config key: " + key);
    if (opt->count() > 0) continue;
    try {
      opt->add_result(value);
      opt->run_callback();
    } catch (const CLI::Error&) {
      throw dbowsum::Error("bad config value for " + key + ": " + value);
    }
  }
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw dbowsum::Error(std::string("missing required flag ") + flag);
}

dbowsum::DbowHyperparams hyper_from(const RunConfig& cfg) {
  dbowsum::DbowHyperparams hyper;
  hyper.dim = cfg.dim;
  hyper.window = cfg.window;
  hyper.negatives = cfg.negatives;
  hyper.epochs = cfg.epochs;
  hyper.alpha0 = cfg.alpha;
  hyper.infer_epochs = cfg.infer_epochs;
  hyper.seed = cfg.seed;
  return hyper;
}

std::vector<std::string> qualified_ids(const std::vector<dbowsum::TokenizedDocument>& docs) {
  std::vector<std::string> ids;
  ids.reserve(docs.size());
  for (const dbowsum::TokenizedDocument& doc : docs) ids.push_back(dbowsum::qualified_doc_id(doc));
  return ids;
}

dbowsum::DbowModel load_model(const RunConfig& cfg, const CLI::App* cmd) {
  require(cfg.model, "--model");
  dbowsum::DbowModel model = dbowsum::DbowModel::load(cfg.model);
  if (cmd->count("--infer-epochs")) model.hyper().infer_epochs = cfg.infer_epochs;
  return model;
}

// One summary for one set under the requested mode. Baselines get their
// vector and error filled in afterwards so the report line is comparable.
dbowsum::SummaryState run_mode(const dbowsum::DocSet& set, const dbowsum::DbowModel& model,
                               const std::string& mode, const RunConfig& cfg) {
  if (mode == "lead" || mode == "random") {
    dbowsum::SummaryState state =
        mode == "lead"
            ? dbowsum::lead_baseline(set, cfg.max_words)
            : dbowsum::random_baseline(
                  set, cfg.max_words,
                  dbowsum::mix_seed(cfg.seed, dbowsum::fnv1a64({set.set_id})));
    const dbowsum::EmbeddingVector c = dbowsum::docset_centroid(set, model);
    dbowsum::finalize_summary(state, c, dbowsum::summary_infer_fn(model));
    return state;
  }
  auto parsed = dbowsum::parse_mode(mode);
  if (!parsed) throw dbowsum::Error("unknown mode: " + mode);
  dbowsum::SummarizerConfig scfg;
  scfg.mode = *parsed;
  scfg.max_words = cfg.max_words;
  scfg.theta = cfg.theta;
  scfg.beam_width = cfg.beam_width;
  return dbowsum::summarize(set, model, scfg);
}

std::string summary_text(const dbowsum::SummaryState& state) {
  std::string text;
  for (const dbowsum::CandidateSentence& cand : state.selected) {
    text += cand.sentence.text;
    text += '\n';
  }
  return text;
}

dbowsum::EvalReport evaluate_sets(const std::vector<dbowsum::DocSet>& sets,
                                  const dbowsum::DbowModel& model, const std::string& mode,
                                  const RunConfig& cfg) {
  std::vector<dbowsum::EvalInput> inputs;
  inputs.reserve(sets.size());
  for (const dbowsum::DocSet& set : sets) {
    inputs.push_back({set.set_id, summary_text(run_mode(set, model, mode, cfg)),
                      set.reference_texts});
  }
  return dbowsum::evaluate_corpus(inputs, cfg.max_words);
}

int cmd_build_vocab(const RunConfig& cfg) {
  require(cfg.corpus, "--corpus");
  require(cfg.out, "--out");
  const std::vector<dbowsum::TokenizedDocument> docs =
      dbowsum::all_documents(dbowsum::load_corpus(cfg.corpus));
  const dbowsum::Vocabulary vocab =
      dbowsum::Vocabulary::build(docs, cfg.min_count, cfg.subsample);
  vocab.save(cfg.out);
  std::printf("vocab tokens=%zu total_count=%llu -> %s\n", vocab.size(),
              static_cast<unsigned long long>(vocab.total_count()), cfg.out.c_str());
  return 0;
}

int cmd_train(const RunConfig& cfg) {
  require(cfg.corpus, "--corpus");
  require(cfg.model, "--model");
  const std::vector<dbowsum::TokenizedDocument> docs =
      dbowsum::all_documents(dbowsum::load_corpus(cfg.corpus));
  dbowsum::Vocabulary vocab = dbowsum::Vocabulary::build(docs, cfg.min_count, cfg.subsample);
  dbowsum::DbowModel model(std::move(vocab), qualified_ids(docs), hyper_from(cfg));
  const dbowsum::TrainingReport report = model.train(docs, cfg.workers);
  model.save(cfg.model);
  std::printf("trained docs=%zu vocab=%zu pairs_seen=%llu final_avg_loss=%.6f\n", docs.size(),
              model.vocab().size(), static_cast<unsigned long long>(report.pairs_seen),
              report.final_avg_loss);
  return 0;
}

int cmd_finetune(const RunConfig& cfg, const CLI::App* cmd) {
  require(cfg.corpus, "--corpus");
  require(cfg.out, "--out");
  dbowsum::DbowModel model = load_model(cfg, cmd);
  if (cmd->count("--seed")) model.hyper().seed = cfg.seed;
  if (cmd->count("--negatives")) model.hyper().negatives = cfg.negatives;
  model.hyper().epochs = cfg.epochs;
  model.hyper().alpha0 = cmd->count("--alpha") ? cfg.alpha : 0.005;

  const std::vector<dbowsum::TokenizedDocument> docs =
      dbowsum::all_documents(dbowsum::load_corpus(cfg.corpus));
  model.add_documents(qualified_ids(docs));
  const dbowsum::TrainingReport report = model.train(docs, cfg.workers);
  model.save(cfg.out);
  std::printf("finetuned docs=%zu pairs_seen=%llu final_avg_loss=%.6f oov_dropped=%llu\n",
              docs.size(), static_cast<unsigned long long>(report.pairs_seen),
              report.final_avg_loss, static_cast<unsigned long long>(report.oov_dropped));
  return 0;
}

int cmd_summarize(const RunConfig& cfg, const CLI::App* cmd) {
  require(cfg.corpus, "--corpus");
  require(cfg.out, "--out");
  const dbowsum::DbowModel model = load_model(cfg, cmd);
  const std::vector<dbowsum::DocSet> sets = dbowsum::load_corpus(cfg.corpus);
  std::filesystem::create_directories(cfg.out);
  for (const dbowsum::DocSet& set : sets) {
    const dbowsum::SummaryState state = run_mode(set, model, cfg.mode, cfg);
    const std::string path =
        (std::filesystem::path(cfg.out) / (set.set_id + ".txt")).string();
    dbowsum::write_summary_file(path, set.set_id, cfg.mode, state);
    std::printf("set=%s mode=%s words=%d sentences=%zu -> %s\n", set.set_id.c_str(),
                cfg.mode.c_str(), state.word_count, state.selected.size(), path.c_str());
  }
  return 0;
}

int cmd_evaluate(const RunConfig& cfg, const CLI::App* cmd) {
  require(cfg.corpus, "--corpus");
  require(cfg.out, "--out");
  const dbowsum::DbowModel model = load_model(cfg, cmd);
  const std::vector<dbowsum::DocSet> sets = dbowsum::load_corpus(cfg.corpus);
  const dbowsum::EvalReport report = evaluate_sets(sets, model, cfg.mode, cfg);
  dbowsum::write_eval_tsv(cfg.out, report);
  auto print_mean = [](const char* metric, const dbowsum::RougeScore& s) {
    std::printf("MEAN\t%s\t%.6f\t%.6f\t%.6f\n", metric, s.precision, s.recall, s.f1);
  };
  print_mean("ROUGE-1", report.mean.rouge1);
  print_mean("ROUGE-2", report.mean.rouge2);
  print_mean("ROUGE-SU4", report.mean.su4);
  return 0;
}

int cmd_project(const RunConfig& cfg, const CLI::App* cmd) {
  require(cfg.corpus, "--corpus");
  require(cfg.out, "--out");
  const dbowsum::DbowModel model = load_model(cfg, cmd);
  const std::vector<dbowsum::DocSet> sets = dbowsum::load_corpus(cfg.corpus);
  std::vector<dbowsum::LabeledVector> items;
  for (const dbowsum::DocSet& set : sets) {
    for (const dbowsum::TokenizedDocument& doc : set.documents) {
      if (!dbowsum::detail::has_in_vocab_token(doc.tokens, model.vocab())) continue;
      items.push_back({set.set_id, "document", model.infer_vector(doc.tokens)});
    }
    const dbowsum::SummaryState state = run_mode(set, model, cfg.mode, cfg);
    if (state.vector.empty()) {
      std::fprintf(stderr, "warning: empty summary for set %s, no system_summary row\n",
                   set.set_id.c_str());
    } else {
      items.push_back({set.set_id, "system_summary", state.vector});
    }
    std::vector<dbowsum::EmbeddingVector> ref_vectors;
    for (const std::string& text : set.reference_texts) {
      const std::vector<std::string> tokens = dbowsum::tokenize(text);
      if (!dbowsum::detail::has_in_vocab_token(tokens, model.vocab())) continue;
      ref_vectors.push_back(model.infer_vector(tokens));
    }
    if (ref_vectors.empty()) {
      std::fprintf(stderr, "warning: no references for set %s, no reference_centroid row\n",
                   set.set_id.c_str());
    } else {
      items.push_back({set.set_id, "reference_centroid", dbowsum::centroid(ref_vectors)});
    }
  }
  dbowsum::write_projection_tsv(cfg.out, dbowsum::project_points(items));
  std::printf("projected points=%zu -> %s\n", items.size(), cfg.out.c_str());
  return 0;
}

int cmd_grid(const RunConfig& cfg, const CLI::App* cmd) {
  require(cfg.corpus, "--corpus");
  require(cfg.out, "--out");
  const dbowsum::DbowModel model = load_model(cfg, cmd);
  const std::vector<dbowsum::DocSet> sets = dbowsum::load_corpus(cfg.corpus);

  struct GridPoint {
    std::string mode;
    double theta = 0.0;
    int beam_width = 0;
  };
  std::vector<GridPoint> points;
  points.push_back({"basic", 0.0, 0});
  for (int t = 50; t <= 100; t += 5) points.push_back({"ss", t / 100.0, 0});
  for (int w = 5; w <= 40; w += 5) points.push_back({"beam", 0.0, w});

  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw dbowsum::Error("cannot write file: " + cfg.out);
  out << "mode\ttheta\tbeam_width\trouge1_f\trouge2_f\trouge_su4_f\n";
  GridPoint best;
  double best_r2 = -1.0;
  for (const GridPoint& point : points) {
    RunConfig run = cfg;
    run.mode = point.mode;
    run.theta = point.theta;
    run.beam_width = point.beam_width;
    const dbowsum::EvalReport report = evaluate_sets(sets, model, point.mode, run);
    char theta_col[32] = "-";
    char width_col[32] = "-";
    if (point.mode == "ss") std::snprintf(theta_col, sizeof(theta_col), "%.2f", point.theta);
    if (point.mode == "beam") std::snprintf(width_col, sizeof(width_col), "%d", point.beam_width);
    char line[256];
    std::snprintf(line, sizeof(line), "%s\t%s\t%s\t%.6f\t%.6f\t%.6f\n", point.mode.c_str(),
                  theta_col, width_col, report.mean.rouge1.f1, report.mean.rouge2.f1,
                  report.mean.su4.f1);
    out << line;
    std::printf("%s", line);
    if (report.mean.rouge2.f1 > best_r2) {
      best_r2 = report.mean.rouge2.f1;
      best = point;
    }
  }
  if (!out) throw dbowsum::Error("cannot write file: " + cfg.out);
  std::printf("best mode=%s", best.mode.c_str());
  if (best.mode == "ss") std::printf(" theta=%.2f", best.theta);
  if (best.mode == "beam") std::printf(" beam_width=%d", best.beam_width);
  std::printf(" rouge2_f=%.6f\n", best_r2);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Paragraph-vector extractive multi-document summarizer"};
  app.require_subcommand(1);

  RunConfig cfg;
  CLI::App* build_vocab = app.add_subcommand("build-vocab", "build and save a vocabulary");
  CLI::App* train = app.add_subcommand("train", "train a model on a corpus");
  CLI::App* finetune = app.add_subcommand("finetune", "continue training on a target corpus");
  CLI::App* summarize = app.add_subcommand("summarize", "write one summary per document set");
  CLI::App* evaluate = app.add_subcommand("evaluate", "score summaries against references");
  CLI::App* project = app.add_subcommand("project", "export a 2D projection TSV");
  CLI::App* grid = app.add_subcommand("grid", "sweep mode/theta/beam width, report ROUGE");
  for (CLI::App* cmd : {build_vocab, train, finetune, summarize, evaluate, project, grid}) {
    add_common_options(cmd, cfg);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    for (CLI::App* cmd : {build_vocab, train, finetune, summarize, evaluate, project, grid}) {
      if (cmd->parsed()) apply_config_file(cmd, cfg.config);
    }
    if (build_vocab->parsed()) return cmd_build_vocab(cfg);
    if (train->parsed()) return cmd_train(cfg);
    if (finetune->parsed()) return cmd_finetune(cfg, finetune);
    if (summarize->parsed()) return cmd_summarize(cfg, summarize);
    if (evaluate->parsed()) return cmd_evaluate(cfg, evaluate);
    if (project->parsed()) return cmd_project(cfg, project);
    if (grid->parsed()) return cmd_grid(cfg, grid);
  } catch (const dbowsum::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
