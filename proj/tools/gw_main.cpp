#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gw/aligned.hpp"
#include "gw/braid.hpp"
#include "gw/cache.hpp"
#include "gw/chords.hpp"
#include "gw/lie.hpp"
#include "gw/tower.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 2;
constexpr int kExitResource = 3;
constexpr int kExitInput = 4;

struct MRange {
  int lo = 0, hi = 0;
};

MRange parse_range(const std::string& s) {
  MRange r;
  auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      r.lo = r.hi = std::stoi(s);
    } else {
      r.lo = std::stoi(s.substr(0, dots));
      r.hi = std::stoi(s.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw CLI::ValidationError("--m", "expected N or A..B");
  }
  if (r.lo > r.hi) throw CLI::ValidationError("--m", "empty range");
  return r;
}

gw::lie::Convention parse_convention(const std::string& s) {
  if (s == "classical") return gw::lie::Convention::Classical;
  if (s == "graded-symmetric") return gw::lie::Convention::GradedSymmetric;
  throw CLI::ValidationError("--convention",
                             "classical or graded-symmetric");
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot write " + out_path);
    f << text;
    if (!text.empty() && text.back() != '\n') f << "\n";
  }
}

std::string report_csv_header() {
  return "m,e1_deg0_free,e1_deg1_free,e1_deg1_torsion2,eta_special,"
         "d1_rows,d1_cols,d1_rank,e2_free,e2_torsion,chord_free,"
         "chord_torsion,match,rational_match\n";
}

std::string torsion_str(const gw::CokerPresentation& p) {
  std::string s;
  for (std::size_t i = 0; i < p.torsion.size(); ++i) {
    if (i) s += " ";
    s += p.torsion[i].get_str();
  }
  return s.empty() ? "-" : s;
}

std::string report_csv_row(const gw::tower::ColumnReport& r) {
  std::string s = std::to_string(r.m) + "," + std::to_string(r.e1_deg0_free) +
                  "," + std::to_string(r.e1_deg1_free) + "," +
                  std::to_string(r.e1_deg1_torsion2) + "," +
                  (r.eta_special ? "1" : "0") + "," +
                  std::to_string(r.d1.rows) + "," + std::to_string(r.d1.cols) +
                  "," + std::to_string(r.d1.rank) + "," +
                  std::to_string(r.e2.free_rank) + "," + torsion_str(r.e2) +
                  "," + std::to_string(r.chord_side.free_rank) + "," +
                  torsion_str(r.chord_side) + "," + (r.match ? "1" : "0") +
                  "," + (r.rational_match ? "1" : "0") + "\n";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact spectral-sequence and configuration-space calculator "
               "for the tower of framed long knots"};
  app.require_subcommand(1);

  std::string m_spec = "3";
  std::string convention = "classical";
  std::string out_path;
  std::string format = "json";
  std::string cache_dir;
  bool no_cache = false;
  int max_m = 6;

  auto add_common = [&](CLI::App* cmd, bool with_m = true) {
    if (with_m) cmd->add_option("--m", m_spec, "column index, N or A..B");
    cmd->add_option("--convention", convention,
                    "classical | graded-symmetric (experimental)");
    cmd->add_option("--out", out_path, "output file (or directory for ranges)");
    cmd->add_option("--format", format, "json | csv");
    cmd->add_option("--cache", cache_dir, "cache directory (default GW_CACHE)");
    cmd->add_flag("--no-cache", no_cache, "disable the on-disk cache");
    cmd->add_option("--max-m", max_m, "largest permitted column");
  };

  CLI::App* cmd_e2 = app.add_subcommand("e2", "verify E^2 vs chord diagrams");
  add_common(cmd_e2);

  CLI::App* cmd_e1 = app.add_subcommand("e1", "E^1 column ranks");
  add_common(cmd_e1);
  int degree = 0;
  cmd_e1->add_option("--degree", degree, "total degree (0 or 1)");

  CLI::App* cmd_d1 = app.add_subcommand("d1", "d^1 matrix into the 0-line");
  add_common(cmd_d1);

  CLI::App* cmd_chord = app.add_subcommand("chord", "A^I_m presentation");
  add_common(cmd_chord);
  bool sparse = false;
  cmd_chord->add_flag("--sparse", sparse,
                      "sparse elimination (always on; accepted for scripts)");

  CLI::App* cmd_hall = app.add_subcommand("hall", "Hall (Lyndon) basis words");
  int letters = 2, length = 2;
  cmd_hall->add_option("--letters", letters, "alphabet size")->required();
  cmd_hall->add_option("--length", length, "bracket length")->required();
  cmd_hall->add_option("--convention", convention, "classical | graded-symmetric");
  cmd_hall->add_option("--out", out_path, "output file");

  CLI::App* cmd_check = app.add_subcommand("config-check",
                                           "numeric identity checks");
  std::uint64_t seed = 42;
  int samples = 1000, max_n = 6, threads = 1;
  double tol = 1e-9;
  std::string knot_file;
  cmd_check->add_option("--seed", seed, "base seed");
  cmd_check->add_option("--samples", samples, "seeded inputs per check");
  cmd_check->add_option("--tol", tol, "tolerance");
  cmd_check->add_option("--max-n", max_n, "largest point count");
  cmd_check->add_option("--threads", threads, "worker threads");
  cmd_check->add_option("--knot", knot_file, "knot JSON file to exercise");
  cmd_check->add_option("--out", out_path, "output CSV file");

  CLI::App* cmd_cache = app.add_subcommand("cache", "cache maintenance");
  CLI::App* cmd_gc = cmd_cache->add_subcommand("gc", "drop stale entries");
  bool gc_all = false;
  cmd_gc->add_flag("--all", gc_all, "drop everything");
  cmd_gc->add_option("--cache", cache_dir, "cache directory");

  CLI11_PARSE(app, argc, argv);

  try {
    std::optional<gw::Cache> cache;
    if (!no_cache) {
      cache.emplace(cache_dir.empty() ? gw::Cache::default_dir()
                                      : std::filesystem::path(cache_dir));
    }
    gw::Cache* cache_ptr = cache ? &*cache : nullptr;

    if (cmd_gc->parsed()) {
      std::size_t removed = cache_ptr ? cache_ptr->gc(gc_all) : 0;
      std::cout << "removed " << removed << " entries\n";
      return kExitOk;
    }

    if (cmd_hall->parsed()) {
      gw::lie::LieContext ctx(parse_convention(convention));
      auto words = ctx.hall_words(letters, length);
      nlohmann::json arr = nlohmann::json::array();
      for (const auto* m : words) arr.push_back(m->text());
      nlohmann::json j{{"letters", letters},
                       {"length", length},
                       {"count", words.size()},
                       {"words", arr}};
      emit(j.dump(2), out_path);
      return kExitOk;
    }

    if (cmd_check->parsed()) {
      gw::aligned::CheckOptions opt;
      opt.seed = seed;
      opt.samples = samples;
      opt.tol = tol;
      opt.max_n = max_n;
      opt.threads = threads;
      gw::knots::FramedKnot knot;
      if (!knot_file.empty()) {
        std::ifstream in(knot_file);
        if (!in) {
          std::cerr << "error: cannot read knot file " << knot_file << "\n";
          return kExitInput;
        }
        try {
          knot = gw::knots::FramedKnot::from_json(nlohmann::json::parse(in));
        } catch (const std::exception& e) {
          std::cerr << "error: malformed knot file: " << e.what() << "\n";
          return kExitInput;
        }
        opt.knot = &knot;
      }
      auto rows = gw::aligned::run_config_checks(opt);
      emit(gw::aligned::checks_to_csv(rows), out_path);
      bool ok = true;
      for (const auto& r : rows)
        if (!(r.max_error <= opt.tol)) ok = false;
      return ok ? kExitOk : kExitMismatch;
    }

    if (cmd_chord->parsed()) {
      MRange r = parse_range(m_spec);
      if (r.lo < 1 || r.hi > std::max(max_m, 1)) {
        std::cerr << "error: m out of range [1, " << max_m << "]\n";
        return kExitInput;
      }
      nlohmann::json out = nlohmann::json::array();
      for (int m = r.lo; m <= r.hi; ++m) {
        std::string key = "chord/m=" + std::to_string(m) +
                          "/v=" + gw::kVersion;
        nlohmann::json j;
        if (cache_ptr) {
          if (auto hit = cache_ptr->get(key)) j = *hit;
        }
        if (j.is_null()) {
          j = gw::chords::a_i_report(m).to_json();
          if (cache_ptr) cache_ptr->put(key, j);
        }
        out.push_back(j);
      }
      emit(out.size() == 1 ? out[0].dump(2) : out.dump(2), out_path);
      return kExitOk;
    }

    // tower-backed commands
    gw::lie::Convention conv = parse_convention(convention);
    gw::tower::TowerSession session(conv, cache_ptr);

    if (cmd_e1->parsed()) {
      MRange r = parse_range(m_spec);
      if (r.lo < 2 || r.hi > max_m) {
        std::cerr << "error: m out of range [2, " << max_m << "]\n";
        return kExitInput;
      }
      if (degree != 0 && degree != 1) {
        std::cerr << "error: --degree must be 0 or 1\n";
        return kExitInput;
      }
      nlohmann::json out = nlohmann::json::array();
      for (int m = r.lo; m <= r.hi; ++m) {
        auto col = session.e1(m, degree);
        out.push_back(nlohmann::json{
            {"m", m},
            {"total_degree", degree},
            {"free_rank", col.free_rank()},
            {"torsion2_rank", col.torsion_rank},
            {"eta_special", col.eta_special},
            {"lattice", col.free_lattice->to_json()}});
      }
      emit(out.size() == 1 ? out[0].dump(2) : out.dump(2), out_path);
      return kExitOk;
    }

    if (cmd_d1->parsed()) {
      MRange r = parse_range(m_spec);
      if (r.lo < 2 || r.hi > max_m) {
        std::cerr << "error: m out of range [2, " << max_m << "]\n";
        return kExitInput;
      }
      nlohmann::json out = nlohmann::json::array();
      for (int m = r.lo; m <= r.hi; ++m) {
        gw::IntMatrix d1 = session.d1_into_zero_line(m);
        out.push_back(nlohmann::json{
            {"m", m},
            {"rows", d1.rows()},
            {"cols", d1.cols()},
            {"rank", gw::smith_normal_form(d1).divisors.size()},
            {"matrix", d1.to_json()}});
      }
      emit(out.size() == 1 ? out[0].dump(2) : out.dump(2), out_path);
      return kExitOk;
    }

    if (cmd_e2->parsed()) {
      MRange r = parse_range(m_spec);
      if (r.lo < 2 || r.hi > max_m) {
        std::cerr << "error: m out of range [2, " << max_m << "]\n";
        return kExitInput;
      }
      bool all_match = true;
      bool dir_mode = !out_path.empty() &&
                      (r.lo != r.hi ||
                       std::filesystem::is_directory(out_path));
      if (dir_mode) std::filesystem::create_directories(out_path);

      std::string csv = report_csv_header();
      nlohmann::json arr = nlohmann::json::array();
      for (int m = r.lo; m <= r.hi; ++m) {
        gw::tower::ColumnReport rep = session.verify_e2comp(m);
        if (!rep.match) all_match = false;
        if (dir_mode) {
          std::string name = "e2_m" + std::to_string(m) +
                             (format == "csv" ? ".csv" : ".json");
          std::string body = format == "csv"
                                 ? report_csv_header() + report_csv_row(rep)
                                 : rep.to_json().dump(2);
          emit(body, (std::filesystem::path(out_path) / name).string());
        } else {
          csv += report_csv_row(rep);
          arr.push_back(rep.to_json());
        }
      }
      if (!dir_mode) {
        if (format == "csv")
          emit(csv, out_path);
        else
          emit(arr.size() == 1 ? arr[0].dump(2) : arr.dump(2), out_path);
      }
      return all_match ? kExitOk : kExitMismatch;
    }
  } catch (const gw::ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
