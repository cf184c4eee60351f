#include "berkdyn/experiments.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "berkdyn/newton.hpp"

namespace berkdyn {
namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(const Rat& q) {
  if (q.den() == 1) return std::to_string(q.num());
  return std::to_string(q.num()) + "/" + std::to_string(q.den());
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

// Serial CSV sink. Rows are buffered by the caller in canonical order; a
// computation error surfaces as a trailing "# partial:" comment so consumers
// can tell a truncated table from a complete one.
class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw ComputationError("cannot open output file " + path.string());
    write_cols(header);
  }

  void row(const std::vector<std::string>& cols) { write_cols(cols); }

  void partial(const std::string& msg) {
    out_ << "# partial: " << msg << "\n";
    out_.flush();
  }

 private:
  // Fields with embedded commas (disk points) get standard CSV quoting.
  void write_cols(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out_ << ",";
      if (cols[i].find_first_of(",\"") == std::string::npos) {
        out_ << cols[i];
      } else {
        out_ << '"';
        for (char c : cols[i]) {
          if (c == '"') out_ << '"';
          out_ << c;
        }
        out_ << '"';
      }
    }
    out_ << "\n";
  }

  std::ofstream out_;
};

// One unit of fan-out work: a batch of CSV rows plus the flag that tells the
// writer whether the batch completed.
struct Task {
  bool done = false;
  std::vector<std::vector<std::string>> rows;
};

// Runs fn(i) for each task, in parallel when OpenMP is enabled, capturing the
// first failure instead of letting it escape the loop.
template <typename Fn>
std::string run_tasks(std::vector<Task>& tasks, Fn&& fn) {
  std::atomic<bool> failed{false};
  std::mutex mu;
  std::string first_error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(tasks.size()); ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      fn(static_cast<std::size_t>(i));
      tasks[static_cast<std::size_t>(i)].done = true;
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(mu);
      if (!failed.exchange(true)) first_error = e.what();
    }
  }
  return first_error;
}

// Writes completed task rows in order, stopping at the first incomplete
// task; throws after flagging the file when anything failed.
void flush_tasks(CsvFile& csv, const std::vector<Task>& tasks, const std::string& error) {
  for (const auto& t : tasks) {
    if (!t.done) break;
    for (const auto& r : t.rows) csv.row(r);
  }
  if (!error.empty()) {
    csv.partial(error);
    throw ComputationError(error);
  }
}

std::filesystem::path out_path(const Config& cfg, const RunOptions& opts,
                               const std::string& suffix) {
  std::filesystem::path dir(opts.out_dir);
  std::filesystem::create_directories(dir);
  return dir / (cfg.get_or("output.prefix", "run") + "_" + suffix);
}

std::int64_t budget_of(const Config& cfg, const RunOptions& opts) {
  if (opts.degree_budget > 0) return opts.degree_budget;
  return cfg.get_int("map.budget", kDefaultDegreeBudget);
}

RationalMap map_of(const Config& cfg, const Backend& be, const std::string& key,
                   std::int64_t budget) {
  if (!cfg.has(key)) throw ParseError("missing config key " + key);
  return parse_map(be, cfg.get(key), budget);
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Backend backend_from_config(const Config& cfg) {
  const std::string kind = cfg.get_or("backend.kind", "complex");
  if (kind == "complex") return Backend::complex_field();
  const auto p = static_cast<std::int32_t>(cfg.get_int("backend.p", 2));
  const std::int32_t maxn = Backend::max_precision(p);
  const auto prec = static_cast<std::int32_t>(
      cfg.get_int("backend.precision", std::min<std::int32_t>(24, maxn)));
  if (kind == "padic") return Backend::padic(p, prec);
  if (kind == "laurent") return Backend::laurent(p, prec);
  throw ParseError("unknown backend.kind '" + kind + "'");
}

std::vector<BerkPoint> points_from_config(const Config& cfg, const Backend& be) {
  if (!cfg.has("points.list")) throw ParseError("missing config key points.list");
  std::vector<BerkPoint> pts;
  for (const auto& piece : split_list(cfg.get("points.list"), ';')) {
    std::string trimmed;
    for (char c : piece)
      if (!std::isspace(static_cast<unsigned char>(c))) trimmed.push_back(c);
    if (trimmed.empty()) continue;
    pts.push_back(parse_berk_point(be, piece));
  }
  if (pts.empty()) throw ParseError("points.list is empty");
  return pts;
}

std::vector<std::int64_t> int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  for (const auto& piece : split_list(text, ',')) {
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(piece, &pos);
    while (pos < piece.size() && std::isspace(static_cast<unsigned char>(piece[pos]))) ++pos;
    if (pos != piece.size()) throw ParseError("bad integer list entry '" + piece + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("empty integer list");
  return out;
}

std::vector<BerkPoint> standard_test_points(const Backend& be) {
  if (!be.archimedean()) throw BackendMismatch("standard_test_points: complex backend required");
  const double tau = 6.28318530717958647692;
  std::vector<BerkPoint> pts;
  for (double r : {0.999, 1.001})
    for (int k = 0; k < 24; ++k) {
      const double th = tau * k / 24.0;
      pts.push_back(BerkPoint::classical(ProjectivePoint::from_affine(
          Scalar::complex_value({r * std::cos(th), r * std::sin(th)}))));
    }
  for (double r : {0.1, 0.3, 2.0, 5.0})
    for (int k = 0; k < 4; ++k) {
      const double th = tau * k / 4.0;
      pts.push_back(BerkPoint::classical(ProjectivePoint::from_affine(
          Scalar::complex_value({r * std::cos(th), r * std::sin(th)}))));
    }
  return pts;
}

void run_green(const Config& cfg, const RunOptions& opts) {
  const Backend be = backend_from_config(cfg);
  const std::int64_t budget = budget_of(cfg, opts);
  const RationalMap f = map_of(cfg, be, "map.f", budget);
  const auto pts = points_from_config(cfg, be);
  GreenConfig gcfg;
  gcfg.iterations = cfg.get_int("green.iterations", 40);
  gcfg.degree_budget = budget;
  const double offset = f.input_green_offset();

  std::vector<Task> tasks(pts.size());
  const std::string err = run_tasks(tasks, [&](std::size_t i) {
    const KernelValue g = green(f, pts[i], gcfg);
    tasks[i].rows.push_back({std::to_string(i), pts[i].str(), fmt(g.log_value),
                             fmt(g.error_radius), fmt(offset)});
  });
  CsvFile csv(out_path(cfg, opts, "green.csv"),
              {"point_index", "point", "green", "error_radius", "input_offset"});
  flush_tasks(csv, tasks, err);
}

void run_proximity(const Config& cfg, const RunOptions& opts) {
  const Backend be = backend_from_config(cfg);
  const std::int64_t budget = budget_of(cfg, opts);
  const RationalMap f = map_of(cfg, be, "map.f", budget);
  const RationalMap a = map_of(cfg, be, "map.a", budget);
  const auto pts = points_from_config(cfg, be);
  const std::int64_t n = cfg.get_int("proximity.n", 1);
  const double v_f = cfg.get_double("proximity.v_f", 0.0);
  GreenConfig gcfg;
  gcfg.iterations = cfg.get_int("green.iterations", 40);
  gcfg.degree_budget = budget;

  std::vector<Task> tasks(pts.size());
  const std::string err = run_tasks(tasks, [&](std::size_t i) {
    const KernelValue prox = proximity(f, a, pts[i]);
    const KernelValue w = weighted_proximity(f, a, pts[i], n, gcfg, v_f);
    double naive = std::numeric_limits<double>::quiet_NaN();
    double naive_err = std::numeric_limits<double>::quiet_NaN();
    if (!be.archimedean()) {
      const KernelValue nv = naive_pointwise_proximity(f, a, pts[i]);
      naive = nv.log_value;
      naive_err = nv.error_radius;
    }
    tasks[i].rows.push_back({std::to_string(i), pts[i].str(), fmt(prox.log_value),
                             fmt(prox.error_radius), fmt(naive), fmt(naive_err), fmt(w.log_value),
                             fmt(w.error_radius)});
  });
  CsvFile csv(out_path(cfg, opts, "proximity.csv"),
              {"point_index", "point", "proximity", "proximity_error", "naive", "naive_error",
               "weighted", "weighted_error"});
  flush_tasks(csv, tasks, err);
}

void run_condition3(const Config& cfg, const RunOptions& opts) {
  const Backend be = backend_from_config(cfg);
  const std::int64_t budget = budget_of(cfg, opts);
  const RationalMap f = map_of(cfg, be, "map.f", budget);
  const RationalMap a = map_of(cfg, be, "map.a", budget);
  const auto pts = points_from_config(cfg, be);
  const auto ns = int_list(cfg.get_or("condition3.n", "1,2,3,4,5,6"));

  std::vector<Task> tasks(pts.size());
  const std::string err = run_tasks(tasks, [&](std::size_t i) {
    const auto seq = condition3_sequence(f, a, pts[i], ns, budget);
    for (const auto& v : seq)
      tasks[i].rows.push_back({std::to_string(i), pts[i].str(), std::to_string(v.n),
                               fmt(v.value), fmt(v.vlog_over_log_p),
                               v.neg_infinite ? "1" : "0"});
  });
  CsvFile csv(out_path(cfg, opts, "condition3.csv"),
              {"point_index", "point", "n", "value", "vlog_over_log_p", "neg_infinite"});
  flush_tasks(csv, tasks, err);
}

void run_escape(const Config& cfg, const RunOptions& opts) {
  const Backend be = backend_from_config(cfg);
  const std::int64_t budget = budget_of(cfg, opts);
  const RationalMap f = map_of(cfg, be, "map.f", budget);
  if (!f.is_polynomial()) throw ParseError("escape requires a polynomial map");
  const auto pts = points_from_config(cfg, be);
  const std::int64_t max_iter = cfg.get_int("escape.max_iter", 64);
  const std::int64_t d = f.degree();
  if (d < 2) throw ParseError("escape requires degree >= 2");

  const Poly phi = f.f1().dehomogenized().scaled(Scalar::one(be) / f.poly_denominator());
  // Escape thresholds. Complex: |z| > R forces |phi(z)| >= 2 |z|. The
  // non-archimedean analogue in vlog units: below the threshold the leading
  // term dominates strictly and the valuation drops every step.
  double esc_log = 0.0;   // complex: log R
  double esc_vlog = 0.0;  // non-arch: certified once vlog|z| > esc_vlog
  const Scalar lead = phi.coeff(d);
  if (be.archimedean()) {
    double sum = 2.0;
    for (const auto& t : phi.terms())
      if (t.exp < d) sum += std::abs(t.coeff.complex_val());
    esc_log = std::max(0.0, std::log(sum) - std::log(std::abs(lead.complex_val())));
  } else {
    const double vlead = vlog(lead);
    esc_vlog = std::max(0.0, -vlead / static_cast<double>(d - 1));
    for (const auto& t : phi.terms()) {
      if (t.exp >= d || t.coeff.is_zero()) continue;
      const double gap = (vlog(t.coeff) - vlead) / static_cast<double>(d - t.exp);
      esc_vlog = std::max(esc_vlog, gap);
    }
  }

  std::vector<Task> tasks(pts.size());
  const std::string err = run_tasks(tasks, [&](std::size_t i) {
    if (pts[i].kind() != BerkPoint::Kind::Classical && pts[i].kind() != BerkPoint::Kind::Infinity)
      throw DomainError("escape: classical points required");
    ProjectivePoint z = pts[i].kind() == BerkPoint::Kind::Infinity
                            ? ProjectivePoint::infinity(be)
                            : pts[i].point();
    std::int64_t hit = -1;
    double final_log = 0.0;
    for (std::int64_t k = 0; k <= max_iter; ++k) {
      if (z.is_infinity()) {
        hit = k;
        final_log = kPosInf;
        break;
      }
      const Scalar az = z.affine();
      final_log = az.is_zero() ? kNegInf : log_abs(az);
      const bool escaped = be.archimedean() ? (final_log > esc_log)
                                            : (!az.is_zero() && vlog(az) > esc_vlog);
      if (escaped) {
        hit = k;
        break;
      }
      if (k < max_iter) z = f.evaluate(z);
    }
    tasks[i].rows.push_back({std::to_string(i), pts[i].str(),
                             hit >= 0 ? std::string("escaped") : std::string("bounded"),
                             std::to_string(hit), fmt(final_log)});
  });
  CsvFile csv(out_path(cfg, opts, "escape.csv"),
              {"point_index", "point", "status", "n_escape", "final_abs_log"});
  flush_tasks(csv, tasks, err);
}

void run_newton(const Config& cfg, const RunOptions& opts) {
  const Backend be = backend_from_config(cfg);
  if (be.archimedean()) throw ParseError("newton requires a non-archimedean backend");
  const std::int64_t budget = budget_of(cfg, opts);
  if (!cfg.has("newton.poly")) throw ParseError("missing config key newton.poly");
  const RationalMap m = parse_map(be, cfg.get("newton.poly"), budget);
  if (!m.is_polynomial()) throw ParseError("newton.poly must be a polynomial");
  const Poly w = m.f1().dehomogenized().scaled(Scalar::one(be) / m.poly_denominator());

  CsvFile csv(out_path(cfg, opts, "newton.csv"),
              {"kind", "k_start", "k_end", "slope", "root_valuation", "length"});
  try {
    const NewtonPolygon np = newton_polygon(w);
    if (np.zero_multiplicity > 0)
      csv.row({"zero", "", "", "", "", std::to_string(np.zero_multiplicity)});
    for (const auto& seg : np.segments)
      csv.row({"segment", std::to_string(seg.k_start), std::to_string(seg.k_end),
               fmt(seg.slope), fmt(seg.root_valuation), std::to_string(seg.length())});
    if (np.infinity_multiplicity > 0)
      csv.row({"infinity", "", "", "", "", std::to_string(np.infinity_multiplicity)});
  } catch (const std::exception& e) {
    csv.partial(e.what());
    throw;
  }
}

namespace {

void write_measure_lines(std::ofstream& out, const std::string& tag, std::int64_t n,
                         const DiscreteMeasure& m) {
  for (const auto& atom : m.atoms()) {
    out << "{\"measure\":\"" << tag << "\"";
    if (n >= 0) out << ",\"n\":" << n;
    out << ",\"point\":\"" << json_escape(atom.point.str()) << "\"";
    out << ",\"weight\":\"" << fmt(atom.weight) << "\"}\n";
  }
}

std::string profile_json(std::int64_t n, const SkeletonProfile& prof) {
  std::ostringstream out;
  out << "{\"n\":" << n << ",\"total_count\":" << prof.total_count;
  out << ",\"histogram\":[";
  for (std::size_t i = 0; i < prof.histogram.size(); ++i) {
    const auto& h = prof.histogram[i];
    if (i) out << ",";
    const char* kind = h.kind == ValuationMass::Kind::AtZero
                           ? "zero"
                           : (h.kind == ValuationMass::Kind::AtInfinity ? "infinity" : "finite");
    out << "{\"kind\":\"" << kind << "\"";
    if (h.kind == ValuationMass::Kind::Finite) out << ",\"valuation\":\"" << fmt(h.valuation) << "\"";
    out << ",\"mass\":\"" << fmt(h.mass) << "\"}";
  }
  out << "],\"directions\":[";
  for (std::size_t i = 0; i < prof.directions.size(); ++i) {
    const auto& dc = prof.directions[i];
    if (i) out << ",";
    out << "{\"factor_degree\":" << dc.factor_degree << ",\"multiplicity\":" << dc.multiplicity
        << ",\"direction_count\":" << dc.direction_count << ",\"mass_per_direction\":\""
        << fmt(dc.mass_per_direction) << "\"}";
  }
  out << "],\"max_direction_mass\":\"" << fmt(prof.max_direction_mass) << "\"";
  out << ",\"nonzero_valuation_mass\":\"" << fmt(prof.nonzero_valuation_mass()) << "\"}";
  return out.str();
}

}  // namespace

void run_equidist(const Config& cfg, const RunOptions& opts) {
  const Backend be = backend_from_config(cfg);
  const std::int64_t budget = budget_of(cfg, opts);
  const RationalMap f = map_of(cfg, be, "map.f", budget);
  const RationalMap a = map_of(cfg, be, "map.a", budget);
  const auto ns = int_list(cfg.get_or("equidist.n", "4,5,6,7,8,9,10"));

  if (!be.archimedean()) {
    // Non-archimedean branch: Newton-polygon profiles instead of atom lists.
    std::vector<Task> tasks(ns.size());
    std::vector<std::string> lines(ns.size());
    const std::string err = run_tasks(tasks, [&](std::size_t i) {
      const SkeletonProfile prof = nu_profile(f, a, ns[i], budget);
      lines[i] = profile_json(ns[i], prof);
      tasks[i].rows.push_back({std::to_string(ns[i]), std::to_string(prof.total_count),
                               fmt(prof.max_direction_mass), fmt(prof.nonzero_valuation_mass())});
    });
    std::ofstream jout(out_path(cfg, opts, "profiles.jsonl"), std::ios::binary);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (!tasks[i].done) break;
      jout << lines[i] << "\n";
    }
    CsvFile csv(out_path(cfg, opts, "profile.csv"),
                {"n", "total_count", "max_direction_mass", "off_unit_mass"});
    flush_tasks(csv, tasks, err);
    return;
  }

  MuSampleOptions mopts;
  mopts.depth = cfg.get_int("equidist.depth", 12);
  mopts.cap = cfg.get_int("equidist.cap", 4096);
  mopts.rng_seed = opts.has_seed ? opts.seed
                                 : static_cast<std::uint64_t>(cfg.get_int("equidist.rng_seed", 1));
  mopts.degree_budget = budget;
  const ProjectivePoint seed = parse_point(be, cfg.get_or("equidist.seed_point", "2"));
  const DiscreteMeasure mu = mu_sample(f, seed, mopts);

  std::vector<BerkPoint> test_pts;
  const std::string tp = cfg.get_or("equidist.test_points", "standard");
  if (tp == "standard") {
    test_pts = standard_test_points(be);
  } else {
    for (const auto& piece : split_list(tp, ';'))
      test_pts.push_back(parse_berk_point(be, piece));
  }

  CompareConfig ccfg;
  ccfg.green.degree_budget = budget;
  ccfg.green.iterations = cfg.get_int("green.iterations", 40);

  struct NuResult {
    DiscreteMeasure nu;
    CompareReport rep;
  };
  std::vector<std::optional<NuResult>> results(ns.size());
  std::vector<Task> tasks(ns.size());
  const std::string err = run_tasks(tasks, [&](std::size_t i) {
    DiscreteMeasure nu = nu_measure_complex(f, a, ns[i], budget);
    CompareReport rep = compare_measures(nu, mu, f, test_pts, ccfg);
    tasks[i].rows.push_back({std::to_string(ns[i]), fmt(rep.sup_diff), fmt(rep.mean_diff),
                             std::to_string(rep.skipped),
                             std::to_string(nu.atoms().size()),
                             std::to_string(mu.atoms().size())});
    results[i] = NuResult{std::move(nu), std::move(rep)};
  });

  {
    CsvFile csv(out_path(cfg, opts, "compare.csv"),
                {"n", "sup_diff", "mean_diff", "skipped", "nu_atoms", "mu_atoms"});
    flush_tasks(csv, tasks, err);  // throws on error after flagging
  }
  CsvFile annuli(out_path(cfg, opts, "annuli.csv"), {"n", "lo", "hi", "nu_mass", "mu_mass"});
  CsvFile points(out_path(cfg, opts, "points.csv"), {"n", "point_index", "point", "diff"});
  std::ofstream jout(out_path(cfg, opts, "measures.jsonl"), std::ios::binary);
  write_measure_lines(jout, "mu", -1, mu);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto& res = *results[i];
    for (const auto& ann : res.rep.annuli)
      annuli.row({std::to_string(ns[i]), fmt(ann.lo), fmt(ann.hi), fmt(ann.nu_mass),
                  fmt(ann.mu_mass)});
    for (std::size_t j = 0; j < res.rep.point_diffs.size(); ++j)
      points.row({std::to_string(ns[i]), std::to_string(j), test_pts[j].str(),
                  fmt(res.rep.point_diffs[j])});
    write_measure_lines(jout, "nu", ns[i], res.nu);
  }
}

}  // namespace berkdyn
