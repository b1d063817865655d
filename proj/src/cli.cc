// Copyright 2026 The Plumber Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "plumber/cli.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "plumber/error.h"
#include "plumber/evaluation.h"
#include "plumber/http_server.h"
#include "plumber/selector.h"
#include "plumber/service.h"

namespace plumber {

namespace fs = std::filesystem;

namespace {

std::atomic<bool> g_stop{false};

extern "C" void OnSignal(int) { g_stop.store(true); }

// Left-aligned columns separated by two spaces.
void PrintTable(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t i = 0; i < row.size(); ++i) {
      width[i] = std::max(width[i], row[i].size());
    }
  }
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line += row[i];
      if (i + 1 < row.size()) line += std::string(width[i] - row[i].size() + 2, ' ');
    }
    out << line << '\n';
  }
}

std::string Fixed(double v, int digits = 4) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kInvalidRequest, "cannot read " + path.string(),
                path.string());
  }
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

std::string TermCell(const Json& term) {
  return term.contains("iri") ? term["iri"].get<std::string>() : "";
}

struct Options {
  std::optional<std::string> config;
  std::string format = "table";
  std::optional<std::string> kg;
  std::optional<std::string> text;
  std::optional<std::string> file;
  bool automatic = false;
  std::optional<std::string> pipeline;
  std::string corpus;
  std::string profiles;
  std::string out;
  Hyperparameters hp;
  std::optional<int> port;
};

Config LoadConfig(const Options& o, const EnvLookup& env) {
  std::optional<fs::path> path;
  if (o.config) path = fs::path(*o.config);
  return load_config(path, env);
}

int Usage(std::ostream& err, const std::string& message) {
  err << "usage error: " << message << '\n';
  return 1;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err, const EnvLookup& env) {
  CLI::App app{"plumber: information-extraction pipeline framework", "plumber"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config, "Path to config.json");

  auto* components = app.add_subcommand("components", "Inspect the component registry");
  components->require_subcommand(1);
  auto* components_list = components->add_subcommand("list", "List registered components");
  components_list->add_option("--format", o.format)->check(CLI::IsMember({"table", "json"}));

  auto* pipelines = app.add_subcommand("pipelines", "Inspect the pipeline pool");
  pipelines->require_subcommand(1);
  auto* pipelines_list = pipelines->add_subcommand("list", "List every valid pipeline");
  pipelines_list->add_option("--kg", o.kg, "Only pipelines aligned to this KG");
  pipelines_list->add_option("--format", o.format)->check(CLI::IsMember({"table", "json"}));

  auto* run = app.add_subcommand("run", "Run a pipeline on text");
  run->add_option("--text", o.text, "Input text");
  run->add_option("--file", o.file, "UTF-8 text file");
  run->add_flag("--auto", o.automatic, "Select the pipeline automatically");
  run->add_option("--pipeline", o.pipeline, "Pipeline id");
  run->add_option("--kg", o.kg, "KG constraint for --auto");
  std::string run_format = "json";
  run->add_option("--format", run_format)->check(CLI::IsMember({"json", "tsv"}));

  auto* bench = app.add_subcommand("bench", "Benchmark every pipeline on a corpus");
  bench->add_option("--corpus", o.corpus, "Corpus (JSON Lines)")->required();
  bench->add_option("--out", o.out, "Output profiles.json")->required();
  bench->add_option("--kg", o.kg, "Only pipelines aligned to this KG");

  auto* train = app.add_subcommand("train", "Train the pipeline selector");
  train->add_option("--profiles", o.profiles, "profiles.json from bench")->required();
  train->add_option("--corpus", o.corpus, "Corpus (JSON Lines)")->required();
  train->add_option("--out", o.out, "Output model.json")->required();
  train->add_option("--epochs", o.hp.epochs)->check(CLI::NonNegativeNumber);
  train->add_option("--lr", o.hp.learning_rate)->check(CLI::PositiveNumber);
  train->add_option("--l2", o.hp.l2)->check(CLI::NonNegativeNumber);
  train->add_option("--seed", o.hp.seed);

  auto* serve = app.add_subcommand("serve", "Start the HTTP gateway");
  serve->add_option("--port", o.port)->check(CLI::Range(0, 65535));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  try {
    if (*components_list) {
      Service service(LoadConfig(o, env));
      Json list = service.components();
      if (o.format == "json") {
        out << list.dump(2) << '\n';
        return 0;
      }
      std::vector<std::vector<std::string>> rows{{"ID", "TASK", "KGS", "TARGET"}};
      for (const auto& c : list) {
        std::string kgs;
        for (const auto& kg : c["kgs"]) {
          if (!kgs.empty()) kgs += ",";
          kgs += kg.get<std::string>();
        }
        rows.push_back({c["id"].get<std::string>(), c["task"].get<std::string>(),
                        kgs.empty() ? "-" : kgs,
                        c["target"]["kind"].get<std::string>() + ":" +
                            c["target"]["ref"].get<std::string>()});
      }
      PrintTable(out, rows);
      return 0;
    }
    if (*pipelines_list) {
      Service service(LoadConfig(o, env));
      Json result = service.pipelines(o.kg);
      if (o.format == "json") {
        out << result.dump(2) << '\n';
        return 0;
      }
      std::vector<std::vector<std::string>> rows{{"PIPELINE", "KG", "STAGES"}};
      for (const auto& p : result["pipelines"]) {
        rows.push_back({p["id"].get<std::string>(), p["kg"].get<std::string>(),
                        std::to_string(2 + p["linking"].size())});
      }
      PrintTable(out, rows);
      out << result["pipelines"].size() << " pipeline(s)\n";
      return 0;
    }
    if (*run) {
      if (o.text.has_value() == o.file.has_value()) {
        return Usage(err, "run needs exactly one of --text and --file");
      }
      if (o.automatic == o.pipeline.has_value()) {
        return Usage(err, "run needs exactly one of --auto and --pipeline");
      }
      Json body;
      if (o.text) {
        body["text"] = *o.text;
      } else {
        body["file"] = {{"name", fs::path(*o.file).filename().string()},
                        {"content", ReadFile(*o.file)}};
      }
      if (o.automatic) {
        body["mode"] = "automatic";
        if (o.kg) body["kg"] = *o.kg;
      } else {
        body["mode"] = "manual";
        body["pipeline_id"] = *o.pipeline;
      }
      Service service(LoadConfig(o, env));
      Json result = service.run(body);
      if (run_format == "json") {
        out << result.dump(2) << '\n';
      } else {
        out << "subject\tpredicate\tobject\tsubject_iri\tpredicate_iri\tobject_iri\n";
        for (const auto& t : result["triples"]) {
          out << t["subject"]["surface"].get<std::string>() << '\t'
              << t["predicate"]["surface"].get<std::string>() << '\t'
              << t["object"]["surface"].get<std::string>() << '\t'
              << TermCell(t["subject"]) << '\t' << TermCell(t["predicate"])
              << '\t' << TermCell(t["object"]) << '\n';
        }
      }
      if (result["status"] != "ok") {
        err << "stage failure: " << result["failure"].dump() << '\n';
        return 2;
      }
      return 0;
    }
    if (*bench) {
      Service service(LoadConfig(o, env));
      auto corpus = load_corpus(o.corpus);
      auto profiles = service.bench(corpus, o.kg);
      save_profiles(o.out, profiles);
      std::vector<std::vector<std::string>> rows{
          {"PIPELINE", "P", "R", "F1", "FAILURES"}};
      for (const auto& p : profiles) {
        rows.push_back({p.pipeline_id, Fixed(p.report.precision),
                        Fixed(p.report.recall), Fixed(p.report.f1),
                        std::to_string(p.failures)});
      }
      PrintTable(out, rows);
      return 0;
    }
    if (*train) {
      Service service(LoadConfig(o, env));
      auto corpus = load_corpus(o.corpus);
      auto profiles = load_profiles(o.profiles);
      TrainResult result = service.train(profiles, corpus, o.hp);
      save_model(o.out, result.model);
      out << Json{{"pipelines", result.model.pipeline_ids},
                  {"epochs", o.hp.epochs},
                  {"initial_loss", result.loss_trajectory.front()},
                  {"final_loss", result.loss_trajectory.back()}}
                 .dump(2)
          << '\n';
      return 0;
    }
    if (*serve) {
      Config config = LoadConfig(o, env);
      if (o.port) config.port = *o.port;
      Service service(config);
      HttpServer server(service);
      int port = server.bind("0.0.0.0", config.port);
      err << "plumber gateway listening on port " << port << '\n';
      g_stop.store(false);
      std::signal(SIGINT, OnSignal);
      std::signal(SIGTERM, OnSignal);
      server.start();
      while (!g_stop.load()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
      }
      err << "draining in-flight requests\n";
      server.stop();
      return 0;
    }
  } catch (const Error& e) {
    err << "error [" << e.code_name() << "]: " << e.what();
    if (!e.subject().empty()) err << " (" << e.subject() << ")";
    err << '\n';
    return http_status(e.code()) < 500 ? 1 : 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace plumber
