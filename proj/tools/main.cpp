#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "elmstream/pipeline.hpp"

namespace {

const char* key_help(const std::string& key) {
  static const std::map<std::string, const char*> help = {
      {"task", "identify | envelope"},
      {"trainer", "batch | linear | oselm | sgelm"},
      {"activation", "sigmoid | sine | radial-basis"},
      {"hidden_dim", "hidden units (default: 100 identify, 10 envelope)"},
      {"ridge", "ridge parameter for batch solves and RLS initialization"},
      {"gamma", "gradient step gain (default: 0.0008 identify, 0.001 envelope)"},
      {"scale_factor", "extra minority step multiplier f_s"},
      {"weighted", "imbalance-weighted updates, 0 or 1"},
      {"allow_unstable", "accept a violating step gain, 0 or 1"},
      {"init_size", "samples consumed by the batch initialization"},
      {"input_lags", "input lag order"},
      {"output_lags", "output lag order"},
      {"horizon", "recurrent prediction window, cycles"},
      {"scale", "multiplier on the task's default split sizes"},
      {"length", "cycles to generate (default: train+eval split)"},
      {"seed", "master seed for excitation, noise and hidden layer"},
      {"hold_min", "minimum excitation hold, cycles"},
      {"hold_max", "maximum excitation hold, cycles"},
      {"u1_lo", "u1 amplitude lower bound"},
      {"u1_hi", "u1 amplitude upper bound"},
      {"u2_lo", "u2 amplitude lower bound"},
      {"u2_hi", "u2 amplitude upper bound"},
      {"u3_lo", "u3 amplitude lower bound"},
      {"u3_hi", "u3 amplitude upper bound"},
      {"sigma_noise", "measurement noise standard deviation"},
      {"data_path", "data CSV path"},
      {"checkpoint_path", "model checkpoint path"},
      {"report_path", "key=value report path"},
      {"predictions_path", "per-cycle prediction CSV path"},
  };
  const auto it = help.find(key);
  return it == help.end() ? "" : it->second;
}

struct SubArgs {
  std::string config_file;
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
};

void add_config_flags(CLI::App* cmd, SubArgs& args) {
  cmd->add_option("--config", args.config_file,
                  "key=value config file; flags override its entries");
  for (const std::string& key : elmstream::config_keys()) {
    CLI::Option* opt =
        cmd->add_option("--" + key, args.values[key], key_help(key));
    args.options.emplace_back(key, opt);
  }
}

elmstream::RunConfig build_config(const SubArgs& args) {
  elmstream::RunConfig cfg;
  if (!args.config_file.empty()) {
    elmstream::load_config_file(cfg, args.config_file);
  }
  for (const auto& [key, opt] : args.options) {
    if (opt->count() > 0) {
      elmstream::apply_key(cfg, key, args.values.at(key));
    }
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streaming ELM trainers on a synthetic nonlinear plant"};
  app.require_subcommand(1);

  SubArgs gen_args, train_args, eval_args, cmp_args;
  CLI::App* gen = app.add_subcommand(
      "gen-data", "generate A-PRBS excitation and simulate the plant");
  add_config_flags(gen, gen_args);
  CLI::App* train = app.add_subcommand(
      "train", "train on the leading split and write a checkpoint");
  add_config_flags(train, train_args);
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "evaluate a checkpoint on the trailing split");
  add_config_flags(evaluate, eval_args);
  CLI::App* compare = app.add_subcommand(
      "compare", "train and evaluate all four trainers");
  add_config_flags(compare, cmp_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      std::cout << elmstream::cmd_gen_data(build_config(gen_args))
                       .report.to_string();
    } else if (train->parsed()) {
      std::cout << elmstream::cmd_train(build_config(train_args))
                       .report.to_string();
    } else if (evaluate->parsed()) {
      std::cout << elmstream::cmd_evaluate(build_config(eval_args))
                       .report.to_string();
    } else if (compare->parsed()) {
      std::cout << elmstream::cmd_compare(build_config(cmp_args)).table;
    }
  } catch (const elmstream::FileError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const elmstream::StabilityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const elmstream::CsvFormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const elmstream::ShapeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
