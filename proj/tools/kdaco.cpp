#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "kdaco/cli/commands.hpp"
#include "kdaco/cli/config.hpp"
#include "kdaco/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"kdaco: ACO teacher/student selection and context-aware distillation"};
  app.require_subcommand(1);

  std::string config_path, out_flag, strategy = "aco", ablation, predictions, labels;
  bool tamper = false;

  auto* gen = app.add_subcommand("gen-data", "generate a synthetic dataset");
  gen->add_option("--config", config_path, "run config")->required()->check(CLI::ExistingFile);
  gen->add_option("--out", out_flag, "output directory");

  auto* sel = app.add_subcommand("select", "search a candidate pool");
  sel->add_option("--config", config_path, "run config")->required()->check(CLI::ExistingFile);
  sel->add_option("--strategy", strategy, "aco | pso | random | grid")
      ->check(CLI::IsMember({"aco", "pso", "random", "grid"}));
  sel->add_option("--out", out_flag, "output directory");

  auto* dis = app.add_subcommand("distill", "train a student by distillation");
  dis->add_option("--config", config_path, "run config")->required()->check(CLI::ExistingFile);
  dis->add_option("--ablation", ablation, "table10 | table11")
      ->check(CLI::IsMember({"table10", "table11"}));
  dis->add_option("--out", out_flag, "output directory");

  auto* eva = app.add_subcommand("evaluate", "score predictions against labels");
  eva->add_option("--predictions", predictions, "predictions CSV")
      ->required()
      ->check(CLI::ExistingFile);
  eva->add_option("--labels", labels, "labels CSV")->required()->check(CLI::ExistingFile);
  eva->add_option("--out", out_flag, "output directory")->required();

  auto* rep = app.add_subcommand("repro-examples", "recompute the worked examples");
  rep->add_option("--out", out_flag, "also write repro_examples.txt here");
  rep->add_flag("--tamper", tamper)->group("");

  CLI11_PARSE(app, argc, argv);

  try {
    if (rep->parsed()) return kdaco::cli::cmd_repro_examples(tamper, out_flag, std::cout);
    if (eva->parsed()) {
      return kdaco::cli::cmd_evaluate(predictions, labels, out_flag, std::cout, std::cerr);
    }
    const auto cfg = kdaco::cli::RunConfig::load(config_path);
    const auto out_dir = kdaco::cli::output_dir(cfg, out_flag);
    if (gen->parsed()) return kdaco::cli::cmd_gen_data(cfg, out_dir, std::cout);
    if (sel->parsed()) return kdaco::cli::cmd_select(cfg, strategy, out_dir, std::cout);
    return kdaco::cli::cmd_distill(cfg, ablation, out_dir, std::cout);
  } catch (const kdaco::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
