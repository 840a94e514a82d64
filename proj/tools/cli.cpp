// Copyright 2026 The locality Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "locality/locality.hpp"

namespace locality::cli {

namespace {

using report::Json;

struct Config {
  std::string command;
  std::string input;
  std::string param = "n";
  std::int64_t block_size = 0;  // 0: take it from the geometry, else 8
  std::vector<std::string> binds;
  std::string samples;
  std::vector<std::string> geometries;
  std::string format = "json";
  std::string out_path;
  double threshold = 0.02;
  bool sweep = false;
  std::string dump_trace;
  std::string layout = "padded";
  std::vector<std::int64_t> eval_at;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_program_text(const std::string& path) {
  namespace fs = std::filesystem;
  fs::path p(path);
  if (!fs::exists(p)) {
    if (const char* dir = std::getenv("LOCALITY_CORPUS_DIR"); dir != nullptr && p.is_relative()) {
      fs::path alt = fs::path(dir) / p;
      if (fs::exists(alt)) p = alt;
    }
  }
  std::ifstream in(p);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

dsl::Bindings parse_binds(const std::vector<std::string>& binds) {
  dsl::Bindings out;
  for (const auto& b : binds) {
    const auto eq = b.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--bind expects name=value, got '" + b + "'");
    try {
      std::size_t used = 0;
      const std::string value = b.substr(eq + 1);
      out[b.substr(0, eq)] = std::stoll(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::logic_error&) {
      throw UsageError("--bind value is not an integer: '" + b + "'");
    }
  }
  return out;
}

std::vector<std::int64_t> parse_samples(const std::string& text, std::int64_t block_size) {
  std::vector<std::int64_t> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      parts.push_back(std::stoll(item));
    } catch (const std::logic_error&) {
      throw UsageError("--samples expects start:stop:step, got '" + text + "'");
    }
  }
  if (parts.size() != 3 || parts[2] <= 0 || parts[0] > parts[1]) {
    throw UsageError("--samples expects start:stop:step with start <= stop and step > 0, got '" + text + "'");
  }
  std::vector<std::int64_t> out;
  for (std::int64_t n = parts[0]; n <= parts[1]; n += parts[2]) {
    if (n <= 0 || n % block_size != 0) {
      throw UsageError("sample " + std::to_string(n) + " is not a positive multiple of the block size " +
                       std::to_string(block_size));
    }
    out.push_back(n);
  }
  return out;
}

std::int64_t resolve_block_size(const Config& cfg, const std::vector<CacheGeometry>& geoms) {
  std::int64_t b = cfg.block_size;
  for (const auto& g : geoms) {
    if (b != 0 && b != g.block_elems()) {
      throw UsageError("--b " + std::to_string(b) + " disagrees with geometry " + g.to_string() + " (" +
                       std::to_string(g.block_elems()) + " elements per block)");
    }
    b = g.block_elems();
  }
  return b == 0 ? 8 : b;
}

void emit(const Config& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out_path);
  if (!f) throw UsageError("cannot write '" + cfg.out_path + "'");
  f << text;
}

std::vector<std::string> warnings_for(const dsl::AffineProgram& prog) {
  std::vector<std::string> w;
  if (dsl::top_level_nest_count(prog) > 1) {
    w.push_back(
        "program has more than one top-level loop nest; predicted miss-ratio drops may occur at smaller cache sizes "
        "than observed (moving cliff)");
  }
  return w;
}

struct Analysis {
  SymbolicRITable ri;
  SymbolicCacheTable cache;
  SymbolicSumCheck check;
};

Analysis analyze_program(const Config& cfg, const dsl::AffineProgram& prog, std::int64_t b) {
  dsl::Bindings fixed = parse_binds(cfg.binds);
  fixed.erase(cfg.param);
  for (const auto& s : prog.symbols) {
    if (s != cfg.param && !fixed.contains(s) && dsl::references_symbol(prog, s)) {
      throw UsageError("parameter '" + s + "' must be bound with --bind (only --param " + cfg.param + " stays symbolic)");
    }
  }
  const auto samples = cfg.samples.empty() ? default_samples(prog, b) : parse_samples(cfg.samples, b);
  Analysis a;
  a.ri = derive_symbolic_table(prog, cfg.param, b, samples, fixed);
  a.check = ri_sum_check_symbolic(a.ri);
  a.cache = symbolic_denning(a.ri);
  return a;
}

Json invariance_json(const SymbolicSumCheck& c, const std::string& var) {
  return {{"pass", c.pass},
          {"sum", report::to_json(c.sum, var)},
          {"expected", report::to_json(c.expected, var)},
          {"residual", report::to_json(c.residual, var)}};
}

std::string rendered_csv(const SymbolicCacheTable& t) {
  std::ostringstream os;
  os << "row,ri,portion,m,cold,c\n";
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    os << i << ',' << r.value.render(t.param) << ',' << r.portion.render(t.param) << ','
       << r.adjusted_miss_ratio().render(t.param) << ',' << r.cold_miss_ratio.render(t.param) << ','
       << r.cache_size.render(t.param) << '\n';
  }
  return os.str();
}

int cmd_analyze(const Config& cfg, const dsl::AffineProgram& prog, std::ostream& out, std::ostream& err) {
  const std::int64_t b = cfg.block_size == 0 ? 8 : cfg.block_size;
  const Analysis a = analyze_program(cfg, prog, b);
  const auto warnings = warnings_for(prog);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  if (cfg.format == "json") {
    Json j{{"ri_table", report::to_json(a.ri)},
           {"cache_table", report::to_json(a.cache)},
           {"invariance", invariance_json(a.check, cfg.param)},
           {"warnings", warnings}};
    emit(cfg, out, j.dump(2) + "\n");
  } else if (cfg.format == "csv") {
    emit(cfg, out, rendered_csv(a.cache));
  } else {
    std::ostringstream os;
    report::write_text(os, a.cache);
    os << "RI sum: " << a.check.sum.render(cfg.param) << " (data size " << a.check.expected.render(cfg.param) << ") "
       << (a.check.pass ? "pass" : "FAIL") << '\n';
    os << "valid for " << cfg.param << " % " << a.ri.domain.modulus << " == 0, " << cfg.param
       << " >= " << a.ri.domain.min_n << '\n';
    emit(cfg, out, os.str());
  }
  if (!a.check.pass) {
    err << "RI sum invariance failed; residual " << a.check.residual.render(cfg.param) << '\n';
    return kInvarianceFailed;
  }
  return kOk;
}

std::vector<CacheGeometry> parse_geometries(const Config& cfg) {
  std::vector<CacheGeometry> out;
  for (const auto& g : cfg.geometries) {
    try {
      out.push_back(CacheGeometry::parse(g));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

PaddedLayout make_layout(const Config& cfg, const dsl::AffineProgram& prog, const dsl::Bindings& binds, std::int64_t b) {
  if (cfg.layout == "padded") return pad_layout(prog, binds, b);
  if (cfg.layout == "natural") return natural_layout(prog, binds, b);
  throw UsageError("--layout must be 'padded' or 'natural'");
}

void require_bound(const dsl::AffineProgram& prog, const dsl::Bindings& binds) {
  for (const auto& s : prog.symbols) {
    if (!binds.contains(s) && dsl::references_symbol(prog, s)) {
      throw UnboundSymbolError("parameter '" + s + "' is not bound; use --bind " + s + "=<value>");
    }
  }
}

int cmd_simulate(const Config& cfg, const dsl::AffineProgram& prog, std::ostream& out) {
  const auto geoms = parse_geometries(cfg);
  const dsl::Bindings binds = parse_binds(cfg.binds);
  require_bound(prog, binds);
  const std::int64_t b = resolve_block_size(cfg, geoms);
  const AccessTrace trace = generate_trace(prog, binds, b);
  if (!cfg.dump_trace.empty()) {
    std::ofstream f(cfg.dump_trace);
    if (!f) throw UsageError("cannot write '" + cfg.dump_trace + "'");
    write_trace_text(f, trace);
  }
  const auto addrs = addresses(trace, make_layout(cfg, prog, binds, b));

  if (cfg.sweep) {
    std::ostringstream os;
    os << "capacity,misses,miss_ratio\n";
    const auto blocks = static_cast<std::int64_t>(trace.distinct_blocks());
    for (std::int64_t c = 1;; c *= 2) {
      const std::int64_t cap = std::min(c, std::max<std::int64_t>(blocks, 1));
      const SimResult r = simulate(addrs, CacheGeometry::full(cap, b * CacheGeometry::kElementBytes));
      os << cap << ',' << r.misses << ',' << r.miss_ratio() << '\n';
      if (cap >= blocks) break;
    }
    emit(cfg, out, os.str());
    return kOk;
  }

  if (geoms.empty()) throw UsageError("simulate needs --geometry or --sweep");
  const auto results = sweep(addrs, geoms);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "geometry,capacity,accesses,misses,cold,miss_ratio\n";
    for (std::size_t i = 0; i < geoms.size(); ++i) {
      const auto& r = results[i];
      os << geoms[i].to_string() << ',' << geoms[i].capacity_blocks() << ',' << r.accesses << ',' << r.misses << ','
         << r.cold_misses << ',' << r.miss_ratio() << '\n';
    }
    emit(cfg, out, os.str());
  } else {
    Json arr = Json::array();
    for (std::size_t i = 0; i < geoms.size(); ++i) {
      Json j = report::to_json(results[i]);
      j["geometry"] = geoms[i].to_string();
      j["capacity_blocks"] = geoms[i].capacity_blocks();
      arr.push_back(j);
    }
    Json doc{{"results", arr}, {"warnings", warnings_for(prog)}};
    emit(cfg, out, cfg.format == "json" ? doc.dump(2) + "\n" : doc.dump() + "\n");
  }
  return kOk;
}

int cmd_compare(const Config& cfg, const dsl::AffineProgram& prog, std::ostream& out, std::ostream& err) {
  const auto geoms = parse_geometries(cfg);
  if (geoms.empty()) throw UsageError("compare needs at least one --geometry");
  const dsl::Bindings binds = parse_binds(cfg.binds);
  require_bound(prog, binds);
  const std::int64_t b = resolve_block_size(cfg, geoms);
  Config acfg = cfg;
  acfg.block_size = b;
  const std::int64_t n = binds.contains(cfg.param) ? binds.at(cfg.param) : 0;

  const AccessTrace trace = generate_trace(prog, binds, b);
  const auto addrs = addresses(trace, make_layout(cfg, prog, binds, b));
  auto warnings = warnings_for(prog);

  // The closed-form table is preferred; programs whose RI values do not
  // form a fixed set of polynomial rows fall back to the table of the
  // concrete distribution at n, which is the same model evaluated directly.
  std::string model = "symbolic";
  std::optional<CacheTable> table;
  try {
    const Analysis a = analyze_program(acfg, prog, b);
    if (a.cache.domain.contains(n)) table = cold_adjust(a.cache.at(n));
  } catch (const PiecewiseDetected& e) {
    warnings.push_back(std::string("no symbolic table (") + e.what() + "); using the concrete RI distribution");
  } catch (const MatchAmbiguity& e) {
    warnings.push_back(std::string("no symbolic table (") + e.what() + "); using the concrete RI distribution");
  }
  if (!table) {
    model = "concrete";
    table = cold_adjust(denning_table(analyze(trace)));
  }
  for (const auto& w : warnings) err << "warning: " << w << '\n';

  Json points = Json::array();
  double total_error = 0;
  for (const auto& g : geoms) {
    const CacheQueryResult q = query_miss_ratio(*table, g.capacity_blocks());
    const SimResult s = simulate(addrs, g);
    const double predicted = to_double(q.miss_count);
    const double error = std::abs(predicted - static_cast<double>(s.misses)) / static_cast<double>(s.accesses);
    total_error += error;
    points.push_back({{"geometry", g.to_string()},
                      {"capacity_blocks", g.capacity_blocks()},
                      {"predicted_misses", predicted},
                      {"predicted_miss_ratio", to_string(q.miss_ratio)},
                      {"simulated_misses", s.misses},
                      {"accesses", s.accesses},
                      {"error", error},
                      {"data_movement_accuracy",
                       data_movement_accuracy(predicted, static_cast<double>(s.misses), static_cast<double>(s.accesses))}});
  }
  const double mean = total_error / static_cast<double>(geoms.size());
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "geometry,capacity,predicted,simulated,error,accuracy\n";
    for (const auto& p : points) {
      os << p["geometry"].get<std::string>() << ',' << p["capacity_blocks"] << ',' << p["predicted_misses"] << ','
         << p["simulated_misses"] << ',' << p["error"] << ',' << p["data_movement_accuracy"] << '\n';
    }
    emit(cfg, out, os.str());
  } else {
    Json doc{{"points", points},
             {"model", model},
             {"mean_error", mean},
             {"threshold", cfg.threshold},
             {"warnings", warnings}};
    emit(cfg, out, doc.dump(2) + "\n");
  }
  return mean <= cfg.threshold ? kOk : kThresholdExceeded;
}

int cmd_scale(const Config& cfg, const dsl::AffineProgram& prog, std::ostream& out) {
  const std::int64_t b = cfg.block_size == 0 ? 8 : cfg.block_size;
  const Analysis a = analyze_program(cfg, prog, b);
  const ScalingTable t = min_max_scaling(a.cache);
  Json evals = Json::array();
  for (auto n : cfg.eval_at) {
    Json rows = Json::array();
    for (const auto& r : t.rows) {
      const Rational x = static_cast<long>(n);
      rows.push_back({{"min_cache_size", to_string(r.min_cache_size.eval(x))},
                      {"max_miss_ratio", to_string(r.max_miss_ratio.eval(x))}});
    }
    evals.push_back({{"n", n}, {"rows", rows}});
  }
  if (cfg.format == "json") {
    Json doc = report::to_json(t);
    doc["evaluations"] = evals;
    emit(cfg, out, doc.dump(2) + "\n");
  } else {
    std::ostringstream os;
    if (cfg.format == "csv") {
      os << "row,min_cache_size,max_miss_ratio\n";
      for (std::size_t i = 0; i < t.rows.size(); ++i) {
        os << i << ',' << t.rows[i].min_cache_size.render(t.param) << ',' << t.rows[i].max_miss_ratio.render(t.param)
           << '\n';
      }
    } else {
      report::write_text(os, t);
    }
    for (const auto& e : evals) {
      os << t.param << '=' << e["n"] << ':';
      for (const auto& r : e["rows"]) {
        os << " (" << r["min_cache_size"].get<std::string>() << ", " << r["max_miss_ratio"].get<std::string>() << ')';
      }
      os << '\n';
    }
    emit(cfg, out, os.str());
  }
  return kOk;
}

int cmd_check(const Config& cfg, const dsl::AffineProgram& prog, std::ostream& out) {
  const dsl::Bindings binds = parse_binds(cfg.binds);
  bool concrete = true;
  for (const auto& s : prog.symbols) concrete = concrete && (binds.contains(s) || !dsl::references_symbol(prog, s));
  Json doc;
  bool pass = false;
  if (concrete) {
    const std::int64_t b = cfg.block_size == 0 ? 8 : cfg.block_size;
    const SumCheck c = ri_sum_check(analyze(generate_trace(prog, binds, b, {false, false})));
    pass = c.pass;
    doc = {{"mode", "concrete"},
           {"pass", c.pass},
           {"sum", to_string(c.sum)},
           {"expected", to_string(c.expected)},
           {"residual", to_string(c.residual)}};
  } else {
    const Analysis a = analyze_program(cfg, prog, cfg.block_size == 0 ? 8 : cfg.block_size);
    pass = a.check.pass;
    doc = invariance_json(a.check, cfg.param);
    doc["mode"] = "symbolic";
  }
  if (cfg.format == "json") {
    emit(cfg, out, doc.dump(2) + "\n");
  } else {
    emit(cfg, out, std::string(pass ? "pass" : "FAIL") + "\n");
  }
  return pass ? kOk : kInvarianceFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Locality analysis for affine loop nests", "locality"};
  app.require_subcommand(1, 1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", cfg.input, "Program file (.aff); relative paths also resolve against $LOCALITY_CORPUS_DIR")
        ->required();
    sub->add_option("--b", cfg.block_size, "Elements per cache block (default 8)")->check(CLI::PositiveNumber);
    sub->add_option("--param", cfg.param, "Parameter kept symbolic (default n)");
    sub->add_option("--bind", cfg.binds, "Bind a parameter, name=value (repeatable)");
    sub->add_option("--samples", cfg.samples, "Sample values start:stop:step (multiples of the block size)");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv", "table"}));
    sub->add_option("--out", cfg.out_path, "Write output to this file instead of stdout");
  };
  auto add_geometry = [&](CLI::App* sub) {
    sub->add_option("--geometry", cfg.geometries, "Cache ways:sets:block_bytes or full:blocks:block_bytes (repeatable)");
    sub->add_option("--layout", cfg.layout, "Array layout: padded (default) or natural");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "Derive the symbolic RI and cache tables");
  add_common(analyze);
  CLI::App* simulate = app.add_subcommand("simulate", "Simulate LRU caches on the concrete trace");
  add_common(simulate);
  add_geometry(simulate);
  simulate->add_flag("--sweep", cfg.sweep, "Emit a fully associative capacity sweep as CSV");
  simulate->add_option("--dump-trace", cfg.dump_trace, "Write the access trace to this file");
  CLI::App* compare = app.add_subcommand("compare", "Compare predicted and simulated misses");
  add_common(compare);
  add_geometry(compare);
  compare->add_option("--threshold", cfg.threshold, "Maximum mean error for exit status 0 (default 0.02)");
  CLI::App* scale = app.add_subcommand("scale", "Min-max cache scaling table");
  add_common(scale);
  scale->add_option("--at", cfg.eval_at, "Evaluate the rows at these parameter values");
  CLI::App* check = app.add_subcommand("check", "RI sum invariance only");
  add_common(check);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

  try {
    const dsl::AffineProgram prog = dsl::parse_program(read_program_text(cfg.input));
    if (cfg.command == "analyze") return cmd_analyze(cfg, prog, out, err);
    if (cfg.command == "simulate") return cmd_simulate(cfg, prog, out);
    if (cfg.command == "compare") return cmd_compare(cfg, prog, out, err);
    if (cfg.command == "scale") return cmd_scale(cfg, prog, out);
    return cmd_check(cfg, prog, out);
  } catch (const dsl::ValidationError& e) {
    err << cfg.input << ": " << e.what() << '\n';
    return kInputError;
  } catch (const dsl::DslError& e) {
    err << cfg.input << ':' << e.what() << '\n';
    return kInputError;
  } catch (const PiecewiseDetected& e) {
    err << "error: piecewise behaviour: " << e.what() << '\n';
    return kDerivationError;
  } catch (const MatchAmbiguity& e) {
    err << "error: ambiguous rows: " << e.what() << '\n';
    return kDerivationError;
  } catch (const OrderUnstable& e) {
    err << "error: unstable row order: " << e.what() << '\n';
    return kDerivationError;
  } catch (const CapacityZero& e) {
    err << "error: CapacityZero: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace locality::cli
