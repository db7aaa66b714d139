#include "parlab/labcli/lab.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "parlab/common/digest.hpp"
#include "parlab/common/error.hpp"
#include "parlab/labcli/schema.hpp"

#ifndef PARLAB_VERSION
#define PARLAB_VERSION "dev"
#endif

namespace parlab::lab {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("cannot write " + path.string());
}

}  // namespace

int run_invocation(const Invocation& inv, std::ostream& err) {
  std::string config_bytes;
  {
    std::ifstream in(inv.config_path, std::ios::binary);
    if (!in) {
      err << "error: cannot read config " << inv.config_path.string() << "\n";
      return kExitSchema;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    config_bytes = ss.str();
  }

  Plan plan;
  std::uint64_t seed = 0;
  fs::path out_dir;
  try {
    nlohmann::json config;
    try {
      config = nlohmann::json::parse(config_bytes);
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!config.is_object()) throw SchemaError("config must be a JSON object");
    Fields top(config, "");
    if (auto e = top.maybe<std::string>("experiment"); e && *e != inv.command) {
      top.fail("experiment", "names " + *e + " but the command is " + inv.command);
    }
    seed = inv.seed.value_or(top.opt<std::uint64_t>("seed", 0));
    const auto dir = top.maybe<std::string>("output_dir");
    static const nlohmann::json empty = nlohmann::json::object();
    const nlohmann::json& params = top.has("params") ? top.raw("params") : empty;
    if (!params.is_object()) throw SchemaError("params: expected an object");
    top.done();
    out_dir = inv.out_dir ? *inv.out_dir : dir ? fs::path(*dir) : fs::path("out") / inv.command;
    plan = plan_command(inv.command, params, seed);
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const BudgetExceeded& e) {
    err << "refused: " << e.what() << "\n";
    return kExitBudget;
  } catch (const TooLarge& e) {
    err << "refused: " << e.what() << "\n";
    return kExitBudget;
  }

  ojson manifest;
  manifest["command"] = inv.command;
  manifest["config_path"] = inv.config_path.string();
  manifest["config_sha256"] = sha256_hex(config_bytes);
  manifest["code_version"] = PARLAB_VERSION;
  manifest["seed"] = seed;
  manifest["output_dir"] = out_dir.string();
  manifest["started_at"] = utc_now();
  manifest["finished_at"] = nullptr;
  manifest["status"] = "running";
  manifest["flags"] = plan.flags;

  try {
    fs::create_directories(out_dir);
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }

  int code = kExitOk;
  ojson outputs = ojson::array();
  try {
    for (const OutputFile& f : plan.run()) {
      write_file(out_dir / f.name, f.bytes);
      outputs.push_back({{"name", f.name}, {"sha256", sha256_hex(f.bytes)}});
    }
    manifest["status"] = "ok";
  } catch (const BudgetExceeded& e) {
    err << "refused: " << e.what() << "\n";
    manifest["status"] = "refused";
    code = kExitBudget;
  } catch (const TooLarge& e) {
    err << "refused: " << e.what() << "\n";
    manifest["status"] = "refused";
    code = kExitBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    manifest["status"] = "failed";
    code = kExitFailure;
  }
  manifest["finished_at"] = utc_now();
  manifest["outputs"] = outputs;
  try {
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return code;
}

int lab_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"parity learning lab"};
  app.require_subcommand(1, 1);
  Invocation inv;
  std::string config, out_dir;
  std::uint64_t seed = 0;
  for (const std::string& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "master seed, overrides the config");
    sub->add_option("--out", out_dir, "output directory");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitSchema;
  }
  CLI::App* sub = app.get_subcommands().front();
  inv.command = sub->get_name();
  inv.config_path = config;
  if (sub->count("--seed")) inv.seed = seed;
  if (sub->count("--out")) inv.out_dir = out_dir;
  return run_invocation(inv, err);
}

}  // namespace parlab::lab
