#include "noncollide/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "noncollide/acceptance.hpp"
#include "noncollide/combinat.hpp"
#include "noncollide/diffusion.hpp"
#include "noncollide/error.hpp"
#include "noncollide/json_io.hpp"
#include "noncollide/lgv.hpp"
#include "noncollide/parallel.hpp"
#include "noncollide/random.hpp"
#include "noncollide/rmt.hpp"
#include "noncollide/schur.hpp"
#include "noncollide/walks.hpp"

namespace noncollide {

namespace {

constexpr std::size_t kChunk = 256;  // paths generated per batch before writing

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  std::size_t threads = 1;
};

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) parts.push_back(item);
  if (!text.empty() && text.back() == ',') parts.emplace_back();
  return parts;
}

std::vector<long> parse_longs(const std::string& text, const std::string& flag) {
  std::vector<long> out;
  if (text.empty()) return out;
  for (const auto& p : split(text)) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(p, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != p.size()) throw UsageError(flag + ": '" + p + "' is not an integer");
    out.push_back(v);
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text, const std::string& flag) {
  std::vector<int> out;
  for (long v : parse_longs(text, flag)) out.push_back(static_cast<int>(v));
  return out;
}

std::vector<double> parse_doubles(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  if (text.empty()) return out;
  for (const auto& p : split(text)) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(p, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != p.size()) throw UsageError(flag + ": '" + p + "' is not a number");
    out.push_back(v);
  }
  return out;
}

std::vector<Rational> parse_rationals(const std::string& text, const std::string& flag) {
  std::vector<Rational> out;
  if (text.empty()) return out;
  for (const auto& p : split(text)) {
    try {
      out.push_back(parse_rational(p));
    } catch (const Error&) {
      throw UsageError(flag + ": '" + p + "' is not a rational number");
    }
  }
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(std::span<const long> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

/// Destination of a command's primary output: the --out file or the given stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw Error(ErrorKind::InvalidArgument, "cli", "cannot open '" + path + "' for writing");
    os_ = file_.get();
  }
  std::ostream& operator*() { return *os_; }
  void finish() {
    os_->flush();
    if (!*os_) throw Error(ErrorKind::InvalidArgument, "cli", "write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cli", "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, "json", std::string("malformed JSON in '") + path + "': " + e.what());
  }
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, "json", std::string("malformed JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

struct CountArgs {
  std::string start, end, method = "vicious";
  int steps = 0;
};

void cmd_count(const CountArgs& a, const Globals& g, std::ostream& out) {
  const LatticeConfig start(parse_longs(a.start, "--start"));
  const auto& x = start.positions();
  const int T = a.steps;
  if (T < 0) throw UsageError("--steps must be nonnegative");
  Sink sink(g.out, out);
  if (a.end.empty()) {
    const CountTable table = build_count_table(x, T);
    if (g.format == "json") {
      Json j;
      j["start"] = x;
      j["horizon"] = T;
      j["counts"] = Json::array();
      for (const auto& [y, c] : table.counts) {
        Json row;
        row["end"] = y;
        row["count"] = to_string(c);
        row["probability"] = to_string(table.probability(y));
        j["counts"].push_back(std::move(row));
      }
      j["survival_probability"] = to_string(table.survival_probability());
      *sink << j.dump(2) << "\n";
    } else {
      for (std::size_t i = 1; i <= x.size(); ++i) *sink << "y_" << i << ",";
      *sink << "count,probability\n";
      for (const auto& [y, c] : table.counts) {
        for (long v : y) *sink << v << ",";
        *sink << to_string(c) << "," << to_string(table.probability(y)) << "\n";
      }
    }
    sink.finish();
    return;
  }
  const std::vector<long> y = parse_longs(a.end, "--end");
  if (y.size() != x.size()) throw UsageError("--start and --end differ in walker count");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (((y[i] - x[i] - T) % 2 + 2) % 2 != 0)
      throw Error(ErrorKind::Parity, "walks",
                  "walker " + std::to_string(i + 1) + " cannot move from " + std::to_string(x[i]) + " to " + std::to_string(y[i]) +
                      " in " + std::to_string(T) + " steps (parity)");
  BigInt result;
  if (a.method == "vicious") {
    result = count_vicious(x, y, T);
  } else if (a.method == "canonical") {
    if (x != canonical_start(x.size())) throw Error(ErrorKind::InvalidArgument, "walks", "canonical method needs start 0,2,...");
    result = count_canonical(y, x.size(), T);
  } else if (a.method == "enumerate") {
    result = BigInt(static_cast<unsigned long>(enumerate_vicious(start, y, T).size()));
  } else {
    for (std::size_t i = 1; i < y.size(); ++i)
      if (!(y[i - 1] < y[i])) throw Error(ErrorKind::InvalidArgument, "walks", "--end must be strictly increasing");
    const long lo = std::min(x.front(), y.front()) - T, hi = std::max(x.back(), y.back()) + T;
    const PathGraph graph = vicious_walk_graph(lo, hi, T);
    std::vector<std::size_t> src, dst;
    for (long v : x) src.push_back(graph.index(walk_vertex(v, 0)));
    for (long v : y) dst.push_back(graph.index(walk_vertex(v, T)));
    const Rational det = lgv_determinant(graph, src, dst);
    result = det.get_num();
  }
  *sink << to_string(result) << "\n";
  sink.finish();
}

struct TableauArgs {
  std::string in, record, shape;
  std::optional<int> walkers, steps, max_entry;
  bool count_only = false;
};

void cmd_tableau(const TableauArgs& a, const Globals& g, std::ostream& out) {
  Sink sink(g.out, out);
  if (!a.shape.empty() || a.max_entry) {
    if (!a.max_entry) throw UsageError("--shape needs --max-entry");
    const Partition shape(parse_ints(a.shape, "--shape"));
    if (a.count_only) {
      *sink << count_ssyt(shape, *a.max_entry) << "\n";
    } else {
      const auto all = enumerate_ssyt(shape, *a.max_entry);
      Json j;
      j["shape"] = to_json(shape);
      j["max_entry"] = *a.max_entry;
      j["count"] = all.size();
      j["tableaux"] = Json::array();
      for (const auto& t : all) j["tableaux"].push_back(t.rows());
      *sink << j.dump(2) << "\n";
    }
    sink.finish();
    return;
  }
  if (a.in.empty() == a.record.empty()) throw UsageError("tableau needs exactly one of --in or --record (or --shape)");
  const Json j = a.in.empty() ? parse_json_text(a.record) : read_json_file(a.in);
  if (j.is_object() && j.contains("steps") && j.contains("start")) {
    *sink << to_json(walk_to_tableau(walk_from_json(j))).dump(2) << "\n";
  } else if (j.is_object() && j.contains("rows")) {
    const SSYT t = ssyt_from_json(j);
    const std::size_t walkers = a.walkers ? static_cast<std::size_t>(*a.walkers) : conjugate(t.shape()).length();
    const int steps = a.steps ? *a.steps : t.max_entry();
    *sink << to_json(tableau_to_walk(t, walkers, steps)).dump(2) << "\n";
  } else {
    throw Error(ErrorKind::InvalidArgument, "json", "record is neither a walk {start, steps, horizon} nor a tableau {shape, rows, max_entry}");
  }
  sink.finish();
}

struct SchurArgs {
  std::string shape, points, method = "dualjt";
};

void cmd_schur(const SchurArgs& a, const Globals& g, std::ostream& out) {
  const Partition shape(parse_ints(a.shape, "--shape"));
  EvalPoint z{parse_rationals(a.points, "--points")};
  Rational value;
  if (a.method == "ssyt") {
    value = schur_ssyt_sum(shape, z);
  } else if (a.method == "bialternant") {
    value = schur_bialternant(shape, z);
  } else if (a.method == "dualjt") {
    value = schur_dual_jt(shape, z);
  } else {
    if (!std::all_of(z.values.begin(), z.values.end(), [](const Rational& v) { return v == 1; }))
      throw Error(ErrorKind::InvalidArgument, "schur", "the principal method evaluates at points that are all 1");
    value = Rational(principal_specialization(shape, static_cast<int>(z.size())));
  }
  Sink sink(g.out, out);
  *sink << to_string(value) << "\n";
  sink.finish();
}

struct LgvArgs {
  std::string graph, sources, sinks;
  bool brute_force = false;
};

void cmd_lgv(const LgvArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  const PathGraph graph = graph_from_json(read_json_file(a.graph));
  std::vector<std::size_t> src, dst;
  for (const auto& id : split(a.sources)) src.push_back(graph.index(id));
  for (const auto& id : split(a.sinks)) dst.push_back(graph.index(id));
  const Rational det = lgv_determinant(graph, src, dst);
  const bool compatible = check_compatibility(graph, src, dst);
  std::optional<Rational> brute;
  if (a.brute_force) brute = brute_force_tuples(graph, src, dst, true);
  Sink sink(g.out, out);
  if (g.format == "json") {
    Json j;
    j["determinant"] = to_string(det);
    j["compatible"] = compatible;
    if (brute) j["nonintersecting_sum"] = to_string(*brute);
    *sink << j.dump(2) << "\n";
  } else {
    *sink << to_string(det) << "\n";
    if (brute) *sink << to_string(*brute) << "\n";
    if (!compatible) err << "warning: sources and sinks are not D-compatible; the determinant is a signed sum\n";
  }
  sink.finish();
}

struct SampleWalkArgs {
  std::string start, method = "doob";
  int steps = 0;
  std::size_t n = 1;
};

void cmd_sample_walk(const SampleWalkArgs& a, const Globals& g, std::ostream& out) {
  const LatticeConfig start(parse_longs(a.start, "--start"));
  if (a.steps < 0) throw UsageError("--steps must be nonnegative");
  std::optional<ConditionedWalkSampler> sampler;
  if (a.method == "doob") sampler.emplace(start, a.steps);
  Sink sink(g.out, out);
  const bool json = g.format == "json";
  Json j;
  if (json) {
    j["command"] = "sample-walk";
    j["seed"] = g.seed;
    j["method"] = a.method;
    j["start"] = start.positions();
    j["horizon"] = a.steps;
    j["samples"] = Json::array();
  } else {
    *sink << "# noncollide sample-walk seed=" << g.seed << " start=" << join(start.positions()) << " steps=" << a.steps
          << " method=" << a.method << "\n";
    *sink << "sample_id,t,walker_id,position\n";
  }
  for (std::size_t base = 0; base < a.n; base += kChunk) {
    const std::size_t count = std::min(kChunk, a.n - base);
    std::vector<std::optional<WalkRecord>> batch(count);
    parallel_for(count, g.threads, [&](std::size_t k) {
      Engine rng = stream_engine(g.seed, base + k);
      batch[k] = sampler ? sampler->sample(rng) : rejection_sample(start, a.steps, rng);
    });
    for (std::size_t k = 0; k < count; ++k) {
      const WalkRecord& w = *batch[k];
      if (json) {
        j["samples"].push_back(to_json(w));
        continue;
      }
      for (int t = 0; t <= w.horizon(); ++t) {
        const auto pos = w.positions(t);
        for (std::size_t i = 0; i < pos.size(); ++i) *sink << base + k << "," << t << "," << i + 1 << "," << pos[i] << "\n";
      }
    }
  }
  if (json) *sink << j.dump(2) << "\n";
  sink.finish();
}

struct ScalingArgs {
  std::string start = "0,2", y, scales = "100,400";
  double t = 1.0;
};

void cmd_scaling(const ScalingArgs& a, const Globals& g, std::ostream& out) {
  const LatticeConfig start(parse_longs(a.start, "--start"));
  const auto y = parse_doubles(a.y, "--y");
  const auto scales = parse_doubles(a.scales, "--L");
  Sink sink(g.out, out);
  Json j = Json::array();
  if (g.format != "json") *sink << "L,steps,lhs,rhs,relative_error\n";
  for (double L : scales) {
    const ScalingComparison c = scaling_check(start, a.t, y, L);
    if (g.format == "json") {
      Json row;
      row["L"] = L;
      row["steps"] = c.steps;
      row["rounded_end"] = c.rounded_end;
      row["lhs"] = c.lhs;
      row["rhs"] = c.rhs;
      row["relative_error"] = c.relative_error();
      j.push_back(std::move(row));
    } else {
      *sink << num(L) << "," << c.steps << "," << num(c.lhs) << "," << num(c.rhs) << "," << num(c.relative_error()) << "\n";
    }
  }
  if (g.format == "json") *sink << j.dump(2) << "\n";
  sink.finish();
}

struct SimulateArgs {
  std::size_t n = 2, steps = 1000, paths = 1, record_every = 1;
  double t = 1.0;
  std::string start;
};

void write_paths(const std::string& command, const SimulateArgs& a, const Globals& g, std::ostream& out,
                 const std::function<SamplePath(Engine&, const SimulationOptions&)>& simulate) {
  if (a.n == 0) throw UsageError("--n must be at least 1");
  if (a.steps == 0) throw UsageError("--steps must be at least 1");
  SimulationOptions options;
  options.record_every = std::max<std::size_t>(1, a.record_every);
  Sink sink(g.out, out);
  const bool json = g.format == "json";
  Json j;
  if (json) {
    j["command"] = command;
    j["seed"] = g.seed;
    j["n"] = a.n;
    j["t"] = a.t;
    j["steps"] = a.steps;
    j["record_every"] = options.record_every;
    j["start"] = a.start.empty() ? "origin" : a.start;
    j["paths"] = Json::array();
  } else {
    *sink << "# noncollide " << command << " seed=" << g.seed << " n=" << a.n << " t=" << num(a.t) << " steps=" << a.steps
          << " paths=" << a.paths << " record_every=" << options.record_every
          << " start=" << (a.start.empty() ? std::string("origin") : a.start) << "\n";
    *sink << "path_id,t,i,value\n";
  }
  for (std::size_t base = 0; base < a.paths; base += kChunk) {
    const std::size_t count = std::min(kChunk, a.paths - base);
    std::vector<SamplePath> batch(count);
    parallel_for(count, g.threads, [&](std::size_t k) {
      Engine rng = stream_engine(g.seed, base + k);
      batch[k] = simulate(rng, options);
      batch[k].seed = g.seed;
      batch[k].stream = base + k;
    });
    for (std::size_t k = 0; k < count; ++k) {
      const SamplePath& p = batch[k];
      if (json) {
        Json pj;
        pj["path_id"] = base + k;
        pj["scheme"] = p.scheme;
        pj["step"] = p.step;
        pj["halvings"] = p.halvings;
        pj["times"] = p.times;
        pj["states"] = p.states;
        j["paths"].push_back(std::move(pj));
        continue;
      }
      std::string block;
      for (std::size_t r = 0; r < p.times.size(); ++r) {
        const std::string prefix = std::to_string(base + k) + "," + num(p.times[r]) + ",";
        for (std::size_t i = 0; i < p.states[r].size(); ++i) block += prefix + std::to_string(i + 1) + "," + num(p.states[r][i]) + "\n";
      }
      *sink << block;
    }
  }
  if (json) *sink << j.dump(2) << "\n";
  sink.finish();
}

struct DensityArgs {
  std::string kind, x, y, method = "closed-form", grid;
  double t = 1.0, s = 0.0;
  std::optional<double> horizon;
  std::size_t n = 0, mc_samples = 100'000;
};

SurvivalMethod survival_method(const std::string& name) {
  if (name == "closed-form") return SurvivalMethod::closed_form;
  if (name == "quadrature") return SurvivalMethod::quadrature;
  if (name == "montecarlo") return SurvivalMethod::montecarlo;
  return SurvivalMethod::asymptotic;
}

void cmd_density(const DensityArgs& a, const Globals& g, std::ostream& out) {
  const bool origin = a.x.empty() || a.x == "origin";
  std::optional<WeylPoint> x;
  if (!origin) x.emplace(parse_doubles(a.x, "--x"));
  auto start = [&]() -> StartState {
    if (x) return *x;
    return Origin{};
  };
  std::function<double(const WeylPoint&)> density;
  if (a.kind == "km") {
    if (!x) throw UsageError("density km needs --x");
    density = [&](const WeylPoint& y) { return km_density(a.t, *x, y); };
  } else if (a.kind == "g") {
    if (!a.horizon) throw UsageError("density g needs --horizon");
    density = [&](const WeylPoint& y) { return transition_inhomogeneous(a.s, start(), a.t, y, *a.horizon); };
  } else if (a.kind == "p") {
    density = [&](const WeylPoint& y) { return transition_homogeneous(a.s, start(), a.t, y); };
  }
  Sink sink(g.out, out);
  if (a.kind == "survival") {
    if (!x) throw UsageError("density survival needs --x");
    SurvivalOptions options;
    options.method = survival_method(a.method);
    options.mc_samples = a.mc_samples;
    options.seed = g.seed;
    const SurvivalEstimate e = survival_estimate(a.t, *x, options);
    if (g.format == "json") {
      Json j;
      j["value"] = e.value;
      j["std_error"] = e.std_error;
      if (options.method == SurvivalMethod::montecarlo) j["seed"] = g.seed;
      *sink << j.dump(2) << "\n";
    } else {
      *sink << num(e.value) << "\n";
    }
    sink.finish();
    return;
  }
  if (!a.grid.empty()) {
    const auto spec = parse_doubles(a.grid, "--grid");
    if (spec.size() != 3 || spec[2] < 2 || !(spec[1] > spec[0])) throw UsageError("--grid expects lo,hi,points");
    const std::size_t dim = x ? x->size() : (a.n ? a.n : 2);
    if (dim != 2) throw Error(ErrorKind::Unsupported, "diffusion", "density grids are two-dimensional");
    const auto m = static_cast<std::size_t>(spec[2]);
    const double h = (spec[1] - spec[0]) / static_cast<double>(m - 1);
    *sink << "y1,y2,value\n";
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = i + 1; k < m; ++k) {
        const double y1 = spec[0] + h * static_cast<double>(i), y2 = spec[0] + h * static_cast<double>(k);
        *sink << num(y1) << "," << num(y2) << "," << num(density(WeylPoint({y1, y2}))) << "\n";
      }
    sink.finish();
    return;
  }
  if (a.y.empty()) throw UsageError("density needs --y or --grid");
  const WeylPoint y(parse_doubles(a.y, "--y"));
  const double v = density(y);
  if (g.format == "json") {
    Json j;
    j["value"] = v;
    *sink << j.dump(2) << "\n";
  } else {
    *sink << num(v) << "\n";
  }
  sink.finish();
}

struct VerifyArgs {
  std::string suite = "all", report;
  std::vector<int> criteria;
};

int cmd_verify(const VerifyArgs& a, const Globals& g, std::ostream& out) {
  AcceptanceOptions options;
  options.threads = g.threads;
  auto print = [&](const CriterionResult& r) {
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.1f", r.seconds);
    out << (r.pass() ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.title << " (" << secs << " s)\n";
    for (const auto& c : r.checks)
      if (!c.pass) out << "     failed check: " << c.name << " statistic=" << num(c.statistic) << " threshold=" << num(c.threshold)
                       << (c.detail.empty() ? "" : " [" + c.detail + "]") << "\n";
    out.flush();
  };
  std::vector<CriterionResult> results;
  if (!a.criteria.empty()) {
    for (int id : a.criteria) {
      results.push_back(run_criterion(id, options));
      print(results.back());
    }
  } else {
    results = run_suite(a.suite, options, print);
  }
  const auto passed = static_cast<std::size_t>(std::count_if(results.begin(), results.end(), [](const auto& r) { return r.pass(); }));
  out << "suite " << (a.criteria.empty() ? a.suite : std::string("custom")) << ": " << passed << "/" << results.size()
      << " criteria passed\n";
  const std::string report_path = !a.report.empty() ? a.report : g.out;
  if (!report_path.empty()) {
    Json j;
    j["suite"] = a.criteria.empty() ? a.suite : "custom";
    j["pass"] = passed == results.size();
    j["criteria"] = Json::array();
    for (const auto& r : results) j["criteria"].push_back(to_json(r));
    std::ostringstream discard;
    Sink sink(report_path, discard);
    *sink << j.dump(2) << "\n";
    sink.finish();
  }
  return passed == results.size() ? 0 : 1;
}

struct VerifySdeArgs {
  std::string in, report;
  std::size_t gamma_steps = 100'000;
  double z = 1.96;
};

void cmd_verify_sde(const VerifySdeArgs& a, const Globals& g, std::ostream& out) {
  std::ifstream in(a.in);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cli", "cannot open '" + a.in + "'");
  DriftQvAccumulator acc;
  SamplePath current;
  long current_id = -1;
  std::size_t dimension = 0;
  auto flush = [&] {
    if (current_id >= 0) acc.add(current);
    current = SamplePath{};
  };
  std::string line;
  bool header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "path_id,t,i,value") throw Error(ErrorKind::InvalidArgument, "cli", "expected header path_id,t,i,value");
      header = true;
      continue;
    }
    const auto fields = split(line);
    if (fields.size() != 4) throw Error(ErrorKind::InvalidArgument, "cli", "malformed row at line " + std::to_string(line_no));
    long id = 0;
    std::size_t i = 0;
    double t = 0, v = 0;
    try {
      id = std::stol(fields[0]);
      t = std::stod(fields[1]);
      i = static_cast<std::size_t>(std::stoul(fields[2]));
      v = std::stod(fields[3]);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "cli", "malformed row at line " + std::to_string(line_no));
    }
    if (id != current_id) {
      flush();
      current_id = id;
    }
    if (i == 1) {
      current.times.push_back(t);
      current.states.emplace_back();
    }
    if (current.states.empty() || i != current.states.back().size() + 1)
      throw Error(ErrorKind::InvalidArgument, "cli", "rows out of order at line " + std::to_string(line_no));
    current.states.back().push_back(v);
    dimension = std::max(dimension, i);
  }
  flush();
  if (dimension == 0) throw Error(ErrorKind::InsufficientSamples, "rmt", "no eigenvalue rows in '" + a.in + "'");
  const DriftQvReport r = acc.report(a.z);
  Engine rng = stream_engine(g.seed, 0);
  const Eigen::MatrixXd gamma = estimate_gamma(dimension, a.gamma_steps, rng);

  Json j;
  j["input"] = a.in;
  j["seed"] = g.seed;
  j["dimension"] = r.dimension;
  j["paths"] = r.paths;
  j["observations"] = r.observations;
  j["steps_excluded"] = r.steps_excluded;
  j["slope"] = r.slope ? Json(*r.slope) : Json(nullptr);
  j["slope_ci"] = r.slope_ci ? Json::array({r.slope_ci->lo, r.slope_ci->hi}) : Json(nullptr);
  j["intercept"] = r.intercept;
  j["intercept_ci"] = Json::array({r.intercept_ci.lo, r.intercept_ci.hi});
  j["qv"] = r.qv;
  j["qv_ci"] = Json::array({r.qv_ci.lo, r.qv_ci.hi});
  j["confidence_z"] = a.z;
  Json gm = Json::array();
  for (Eigen::Index row = 0; row < gamma.rows(); ++row) {
    Json rj = Json::array();
    for (Eigen::Index col = 0; col < gamma.cols(); ++col) rj.push_back(gamma(row, col));
    gm.push_back(std::move(rj));
  }
  j["gamma"] = std::move(gm);
  j["gamma_steps"] = a.gamma_steps;
  Sink sink(!a.report.empty() ? a.report : g.out, out);
  *sink << j.dump(2) << "\n";
  sink.finish();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vicious walkers, Schur functions, noncolliding diffusions and Dyson Brownian motion", "noncollide"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "64-bit RNG seed");
  app.add_option("--out", g.out, "output file (default: standard output)");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", g.threads, "worker threads for per-path sampling")->check(CLI::PositiveNumber);

  CountArgs count;
  auto* c_count = app.add_subcommand("count", "count nonintersecting walks");
  c_count->add_option("--start", count.start, "starting positions, e.g. 0,2")->required();
  c_count->add_option("--end", count.end, "end positions; omit for the full count table");
  c_count->add_option("--steps", count.steps, "number of steps T")->required();
  c_count->add_option("--method", count.method)->check(CLI::IsMember({"vicious", "canonical", "enumerate", "lgv"}));

  TableauArgs tab;
  auto* c_tab = app.add_subcommand("tableau", "walk <-> SSYT conversion and SSYT enumeration");
  c_tab->add_option("--in", tab.in, "JSON file holding a walk or a tableau");
  c_tab->add_option("--record", tab.record, "inline JSON walk or tableau");
  c_tab->add_option("--walkers", tab.walkers, "walker count for tableau -> walk");
  c_tab->add_option("--steps", tab.steps, "horizon for tableau -> walk");
  c_tab->add_option("--shape", tab.shape, "enumerate SSYT of this shape");
  c_tab->add_option("--max-entry", tab.max_entry, "alphabet bound for enumeration");
  c_tab->add_flag("--count-only", tab.count_only);

  SchurArgs schur;
  auto* c_schur = app.add_subcommand("schur", "evaluate a Schur function exactly");
  c_schur->add_option("--shape", schur.shape, "partition, e.g. 2,1")->required();
  c_schur->add_option("--points", schur.points, "rational values z_1,...,z_n")->required();
  c_schur->add_option("--method", schur.method)->check(CLI::IsMember({"ssyt", "bialternant", "dualjt", "principal"}));

  LgvArgs lgv;
  auto* c_lgv = app.add_subcommand("lgv", "LGV determinant on a JSON graph");
  c_lgv->add_option("--graph", lgv.graph)->required();
  c_lgv->add_option("--sources", lgv.sources, "comma-separated vertex ids")->required();
  c_lgv->add_option("--sinks", lgv.sinks, "comma-separated vertex ids")->required();
  c_lgv->add_flag("--brute-force", lgv.brute_force, "also sum nonintersecting tuples directly");

  SampleWalkArgs walk;
  auto* c_walk = app.add_subcommand("sample-walk", "exact samples of the conditioned walk");
  c_walk->add_option("--start", walk.start)->required();
  c_walk->add_option("--steps", walk.steps)->required();
  c_walk->add_option("--n", walk.n, "number of samples");
  c_walk->add_option("--method", walk.method)->check(CLI::IsMember({"doob", "rejection"}));

  ScalingArgs scaling;
  auto* c_scaling = app.add_subcommand("scaling-check", "lattice counts against the diffusion density");
  c_scaling->add_option("--start", scaling.start);
  c_scaling->add_option("--t", scaling.t);
  c_scaling->add_option("--y", scaling.y, "chamber point")->required();
  c_scaling->add_option("--L", scaling.scales, "comma-separated scales");

  SimulateArgs dyson, matrix, inhom;
  auto add_sim = [&](const char* name, const char* help, SimulateArgs& s, bool with_start) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--n", s.n, "particles / matrix dimension");
    sub->add_option("--t", s.t, "final time (horizon T for simulate-inhomogeneous)");
    sub->add_option("--steps", s.steps);
    sub->add_option("--paths", s.paths);
    sub->add_option("--record-every", s.record_every, "record every k-th grid point");
    if (with_start) sub->add_option("--start", s.start, "initial point; default origin");
    return sub;
  };
  auto* c_dyson = add_sim("simulate-dyson", "Euler-Maruyama paths of Dyson Brownian motion", dyson, true);
  auto* c_matrix = add_sim("simulate-matrix", "eigenvalue paths of Hermitian Brownian motion", matrix, false);
  auto* c_inhom = add_sim("simulate-inhomogeneous", "noncolliding Brownian motion on [0, T]", inhom, false);

  DensityArgs dens;
  auto* c_dens = app.add_subcommand("density", "evaluate km, g, p or survival");
  c_dens->add_option("kind", dens.kind)->required()->check(CLI::IsMember({"km", "g", "p", "survival"}));
  c_dens->add_option("--t", dens.t);
  c_dens->add_option("--s", dens.s);
  c_dens->add_option("--x", dens.x, "start point or 'origin'");
  c_dens->add_option("--y", dens.y);
  c_dens->add_option("--horizon", dens.horizon);
  c_dens->add_option("--n", dens.n, "dimension for origin starts on a grid");
  c_dens->add_option("--method", dens.method)->check(CLI::IsMember({"closed-form", "quadrature", "montecarlo", "asymptotic"}));
  c_dens->add_option("--mc-samples", dens.mc_samples);
  c_dens->add_option("--grid", dens.grid, "lo,hi,points: CSV over the two-dimensional chamber");

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "run acceptance criteria");
  c_ver->add_option("--suite", ver.suite)->check(CLI::IsMember(suite_names()));
  c_ver->add_option("--criterion", ver.criteria, "run only these criteria")->check(CLI::Range(1, 12));
  c_ver->add_option("--report", ver.report, "JSON report path");

  VerifySdeArgs sde;
  auto* c_sde = app.add_subcommand("verify-sde", "drift, quadratic variation and Gamma from eigenvalue paths");
  c_sde->add_option("--in", sde.in, "CSV from simulate-matrix")->required();
  c_sde->add_option("--report", sde.report, "JSON report path");
  c_sde->add_option("--gamma-steps", sde.gamma_steps);
  c_sde->add_option("--z", sde.z, "normal quantile for confidence intervals");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (c_count->parsed()) cmd_count(count, g, out);
    else if (c_tab->parsed()) cmd_tableau(tab, g, out);
    else if (c_schur->parsed()) cmd_schur(schur, g, out);
    else if (c_lgv->parsed()) cmd_lgv(lgv, g, out, err);
    else if (c_walk->parsed()) cmd_sample_walk(walk, g, out);
    else if (c_scaling->parsed()) cmd_scaling(scaling, g, out);
    else if (c_dyson->parsed()) {
      std::optional<WeylPoint> x0;
      if (!dyson.start.empty() && dyson.start != "origin") x0.emplace(parse_doubles(dyson.start, "--start"));
      write_paths("simulate-dyson", dyson, g, out, [&](Engine& rng, const SimulationOptions& o) {
        return simulate_dyson(x0 ? StartState(*x0) : StartState(Origin{}), dyson.n, dyson.t, dyson.steps, rng, o);
      });
    } else if (c_matrix->parsed()) {
      write_paths("simulate-matrix", matrix, g, out,
                  [&](Engine& rng, const SimulationOptions& o) { return eigen_path(matrix.n, matrix.t, matrix.steps, rng, o); });
    } else if (c_inhom->parsed()) {
      write_paths("simulate-inhomogeneous", inhom, g, out, [&](Engine& rng, const SimulationOptions& o) {
        return simulate_inhomogeneous(inhom.n, inhom.t, inhom.steps, rng, o);
      });
    } else if (c_dens->parsed()) cmd_density(dens, g, out);
    else if (c_ver->parsed()) return cmd_verify(ver, g, out);
    else if (c_sde->parsed()) cmd_verify_sde(sde, g, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace noncollide
