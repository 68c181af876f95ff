#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "namekit/audit.hpp"
#include "namekit/config.hpp"
#include "namekit/errors.hpp"
#include "namekit/json_io.hpp"
#include "namekit/log.hpp"
#include "namekit/server.hpp"

namespace {

using namespace namekit;
using nlohmann::json;

struct GlobalOptions {
  std::optional<std::string> config_file;
  std::optional<std::string> dataset_override;
  std::optional<std::string> log_level;
  bool json_output = false;
};

config::AppConfig resolve_config(const GlobalOptions& global) {
  config::AppConfig cfg = config::load_config(global.config_file);
  if (global.dataset_override) cfg.dataset_path = *global.dataset_override;
  if (global.log_level) cfg.log_level = log::parse_level(*global.log_level);
  log::set_level(cfg.log_level);
  return cfg;
}

dataset::LoadResult load_dataset(const config::AppConfig& cfg, const std::string& path,
                                 bool report_issues = true) {
  dataset::LoadOptions options;
  options.format = dataset::format_from_path(path);
  normalization::VariantTable table;
  if (cfg.variant_map_path) {
    table = normalization::VariantTable::load_file(*cfg.variant_map_path);
    options.variant_table = &table;
  }
  dataset::LoadResult result = dataset::load_records(path, options);
  if (report_issues) {
    for (const auto& issue : result.issues) {
      log::warn(path, ":", issue.line, ": ", issue.reason);
    }
  }
  return result;
}

fuzzy::NameIndex build_index(const config::AppConfig& cfg) {
  dataset::LoadResult loaded = load_dataset(cfg, cfg.dataset_path);
  dataset::MergeResult merged = dataset::merge_and_dedupe({loaded.records});
  return fuzzy::NameIndex::build(std::move(merged.records));
}

int cmd_normalize(const GlobalOptions& global, const std::string& text,
                  const std::string& script) {
  config::AppConfig cfg = resolve_config(global);
  normalization::VariantTable table = cfg.variant_map_path
      ? normalization::VariantTable::load_file(*cfg.variant_map_path)
      : normalization::VariantTable::builtin();

  normalization::Script resolved;
  if (script == "persian") resolved = normalization::Script::persian;
  else if (script == "latin") resolved = normalization::Script::latin;
  else resolved = normalization::detect_script(text);

  normalization::NormalizedText normalized =
      resolved == normalization::Script::persian
          ? normalization::normalize_persian(text, table)
          : normalization::normalize_latin(text);
  if (global.json_output) {
    json out{{"input", text},
             {"normalized", normalized.value},
             {"script", resolved == normalization::Script::persian ? "persian" : "latin"}};
    std::cout << out.dump() << "\n";
  } else {
    std::cout << normalized.value << "\n";
  }
  return 0;
}

int cmd_compile(const GlobalOptions& global, const std::vector<std::string>& inputs,
                const std::string& output) {
  config::AppConfig cfg = resolve_config(global);
  std::vector<std::vector<dataset::NameRecord>> collections;
  std::size_t issue_count = 0;
  for (const auto& path : inputs) {
    dataset::LoadResult loaded = load_dataset(cfg, path);
    issue_count += loaded.issues.size();
    collections.push_back(std::move(loaded.records));
  }
  dataset::MergeResult merged = dataset::merge_and_dedupe(collections);
  for (const auto& record : merged.gender_conflicts) {
    log::warn("gender conflict retained: ", record.persian.value, ",",
              record.latin.value, ",", dataset::to_string(record.gender));
  }

  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open output file: " + output);
  out << "persian,latin,gender\n";
  for (const auto& record : merged.records) {
    out << record.persian.value << "," << record.latin.value << ","
        << dataset::to_string(record.gender) << "\n";
  }
  if (global.json_output) {
    json doc{{"records", merged.records.size()},
             {"gender_conflicts", merged.gender_conflicts.size() / 2},
             {"issues", issue_count},
             {"output", output}};
    std::cout << doc.dump() << "\n";
  } else {
    std::cout << "wrote " << merged.records.size() << " records to " << output
              << " (" << issue_count << " rows skipped, "
              << merged.gender_conflicts.size() / 2 << " gender conflicts)\n";
  }
  return 0;
}

int cmd_stats(const GlobalOptions& global, const std::string& path,
              std::size_t top, const std::optional<std::string>& out_file) {
  config::AppConfig cfg = resolve_config(global);
  dataset::LoadResult loaded = load_dataset(cfg, path);
  dataset::DatasetStats stats = dataset::compute_stats(loaded.records);

  json doc = stats;
  if (out_file) {
    std::ofstream out(*out_file, std::ios::trunc);
    if (!out) throw Error("cannot open output file: " + *out_file);
    out << doc.dump(2) << "\n";
  }
  if (global.json_output) {
    std::cout << doc.dump() << "\n";
    return 0;
  }

  std::cout << "records: " << stats.total << "\n"
            << std::fixed << std::setprecision(4)
            << "male fraction: " << stats.male_fraction << "\n"
            << "female fraction: " << 1.0 - stats.male_fraction << "\n"
            << "persian length mean: " << stats.persian_length_mean << "\n"
            << "latin length mean: " << stats.latin_length_mean << "\n";
  auto print_top = [&](const char* label, const std::vector<dataset::CharCount>& counts) {
    std::cout << label << ":";
    for (const auto& c : dataset::top_n(counts, top)) {
      std::cout << " " << c.character << "=" << c.count;
    }
    std::cout << "\n";
  };
  print_top("top male persian chars", stats.male_chars.persian);
  print_top("top male latin chars", stats.male_chars.latin);
  print_top("top female persian chars", stats.female_chars.persian);
  print_top("top female latin chars", stats.female_chars.latin);
  return 0;
}

int cmd_audit(const GlobalOptions& global, const std::string& path,
              std::size_t batch_size, std::size_t parallelism) {
  config::AppConfig cfg = resolve_config(global);
  dataset::LoadResult loaded = load_dataset(cfg, path);
  std::unique_ptr<llm::LlmClient> client = config::make_llm_client(cfg.llm);

  dataset::AuditOptions options;
  options.batch_size = batch_size;
  options.parallelism = parallelism;
  options.model = cfg.llm.model;
  dataset::AuditResult result = dataset::audit_with_llm(loaded.records, *client, options);

  for (const auto& warning : result.warnings) log::warn("audit: ", warning);
  if (global.json_output) {
    json doc{{"flags", result.flags}, {"llm_unavailable", result.llm_unavailable}};
    std::cout << doc.dump() << "\n";
  } else {
    for (const auto& flag : result.flags) {
      std::cout << flag.record.persian.value << "," << flag.record.latin.value
                << "," << dataset::to_string(flag.record.gender) << "\t"
                << flag.reason << "\n";
    }
    std::cout << result.flags.size() << " records flagged\n";
  }
  return result.llm_unavailable ? 1 : 0;
}

int cmd_gender(const GlobalOptions& global, const std::string& name,
               const std::vector<std::string>& image_refs) {
  config::AppConfig cfg = resolve_config(global);
  fuzzy::NameIndex index = build_index(cfg);

  std::unique_ptr<inference::ImageScorer> scorer;
  if (cfg.image_scorer_url) {
    scorer = std::make_unique<inference::HttpImageScorer>(*cfg.image_scorer_url);
  } else {
    scorer = std::make_unique<inference::StubImageScorer>(cfg.image_stub);
  }

  inference::GenderEstimate name_estimate =
      inference::infer_from_name(index, name, cfg.fusion);
  inference::GenderEstimate fused = inference::fuse(
      name_estimate,
      [&]() -> inference::GenderEstimate {
        if (image_refs.empty()) {
          throw ImageUnavailableError("no images supplied");
        }
        return inference::aggregate_image_scores(scorer->score(image_refs),
                                                 cfg.fusion.tie_label);
      },
      cfg.fusion);

  if (global.json_output) {
    std::cout << json(fused).dump() << "\n";
  } else {
    std::cout << dataset::to_string(fused.gender) << " " << std::fixed
              << std::setprecision(2) << fused.probability << "\n";
  }
  return 0;
}

int cmd_suggest(const GlobalOptions& global, const std::string& name, std::size_t k,
                std::optional<int> birth_year, std::optional<std::uint64_t> seed) {
  config::AppConfig cfg = resolve_config(global);
  fuzzy::NameIndex index = build_index(cfg);
  std::unique_ptr<llm::LlmClient> client = config::make_llm_client(cfg.llm);
  std::unique_ptr<nominalist::UsernameStore> store;
  if (cfg.username_store_path) {
    store = std::make_unique<nominalist::FileUsernameStore>(*cfg.username_store_path);
  }

  nominalist::GenerationContext ctx;
  ctx.input_name = name;
  ctx.birth_year = birth_year;
  ctx.rng_seed = seed.value_or(cfg.rng_seed);

  nominalist::SuggestOptions options;
  options.k = k;
  std::vector<nominalist::UsernameCandidate> ranked =
      nominalist::suggest(ctx, &index, client.get(), store.get(), options);

  if (global.json_output) {
    std::cout << json{{"candidates", ranked}}.dump() << "\n";
  } else {
    for (const auto& candidate : ranked) {
      std::cout << std::fixed << std::setprecision(3) << candidate.final_score
                << "  " << candidate.value << "\n";
    }
  }
  return 0;
}

int cmd_serve(const GlobalOptions& global, std::optional<std::string> host,
              std::optional<int> port) {
  config::AppConfig cfg = resolve_config(global);
  if (host) cfg.server.host = *host;
  if (port) cfg.server.port = *port;
  server::Service service(cfg);
  if (global.json_output) {
    std::cout << json{{"listening", cfg.server.host + ":" + std::to_string(cfg.server.port)}}.dump()
              << std::endl;
  }
  return service.run() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persian name toolkit: normalization, dataset statistics, "
               "gender inference and username suggestion"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--config", global.config_file, "JSON config file");
  app.add_option("--dataset", global.dataset_override, "name dataset path");
  app.add_option("--log-level", global.log_level, "debug|info|warn|error");

  auto add_format = [&global](CLI::App* cmd) {
    cmd->add_flag_callback("--json", [&global] { global.json_output = true; },
                           "machine-readable JSON output");
    cmd->add_option_function<std::string>(
           "--format",
           [&global](const std::string& v) { global.json_output = (v == "json"); },
           "text|json")
        ->check(CLI::IsMember({"text", "json"}));
  };

  // normalize
  std::string norm_text, norm_script = "auto";
  CLI::App* normalize = app.add_subcommand("normalize", "canonicalize a name string");
  normalize->add_option("text", norm_text, "input text")->required();
  normalize->add_option("--script", norm_script, "persian|latin|auto")
      ->check(CLI::IsMember({"persian", "latin", "auto"}));
  add_format(normalize);

  // compile
  std::vector<std::string> compile_inputs;
  std::string compile_output;
  CLI::App* compile = app.add_subcommand("compile", "merge and dedupe datasets");
  compile->add_option("inputs", compile_inputs, "input dataset files")->required();
  compile->add_option("-o,--output", compile_output, "output CSV path")->required();
  add_format(compile);

  // stats
  std::string stats_path;
  std::size_t stats_top = 5;
  std::optional<std::string> stats_out;
  CLI::App* stats = app.add_subcommand("stats", "dataset statistics");
  stats->add_option("dataset", stats_path, "dataset file")->required();
  stats->add_option("--top", stats_top, "characters shown per list (text mode)");
  stats->add_option("-o,--output", stats_out, "also write the full JSON report here");
  add_format(stats);

  // audit
  std::string audit_path;
  std::size_t audit_batch = 20, audit_parallelism = 1;
  CLI::App* audit = app.add_subcommand("audit", "flag suspicious records via llm");
  audit->add_option("dataset", audit_path, "dataset file")->required();
  audit->add_option("--batch-size", audit_batch, "records per llm call")
      ->check(CLI::PositiveNumber);
  audit->add_option("--parallelism", audit_parallelism, "concurrent batches")
      ->check(CLI::PositiveNumber);
  add_format(audit);

  // gender
  std::string gender_name;
  std::vector<std::string> gender_images;
  CLI::App* gender = app.add_subcommand("gender", "probabilistic gender estimate");
  gender->add_option("name", gender_name, "name to classify")->required();
  gender->add_option("--images", gender_images, "profile image references");
  add_format(gender);

  // suggest
  std::string suggest_name;
  std::size_t suggest_k = 5;
  std::optional<int> suggest_year;
  std::optional<std::uint64_t> suggest_seed;
  CLI::App* suggest = app.add_subcommand("suggest", "username suggestions");
  suggest->add_option("name", suggest_name, "input name")->required();
  suggest->add_option("-k", suggest_k, "number of usernames")->check(CLI::PositiveNumber);
  suggest->add_option("--birth-year", suggest_year, "year for the year-appending rule");
  suggest->add_option("--seed", suggest_seed, "rng seed");
  add_format(suggest);

  // serve
  std::optional<std::string> serve_host;
  std::optional<int> serve_port;
  CLI::App* serve = app.add_subcommand("serve", "run the HTTP service");
  serve->add_option("--host", serve_host, "bind address");
  serve->add_option("--port", serve_port, "bind port");
  add_format(serve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    std::cerr << app.help() << std::flush;
    return 2;
  }

  try {
    if (*normalize) return cmd_normalize(global, norm_text, norm_script);
    if (*compile) return cmd_compile(global, compile_inputs, compile_output);
    if (*stats) return cmd_stats(global, stats_path, stats_top, stats_out);
    if (*audit) return cmd_audit(global, audit_path, audit_batch, audit_parallelism);
    if (*gender) return cmd_gender(global, gender_name, gender_images);
    if (*suggest) return cmd_suggest(global, suggest_name, suggest_k, suggest_year, suggest_seed);
    if (*serve) return cmd_serve(global, serve_host, serve_port);
  } catch (const namekit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
