// ctm - enumerate, run, and measure the (n,2) Busy Beaver machine spaces.
//
// Subcommands: enumerate, simulate, explore, measure, complexity, compare,
// decode, bounds. All output is deterministic: fixed sort orders, fixed
// float formatting (7 significant digits for measures, 4 decimals for K
// values), and seeded randomness echoed in the header. The reproducibility
// header goes to stderr so stdout stays machine-readable.
//
// Exit codes: 0 success, 1 usage error, 2 computation error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "ctm/ctm.hpp"

namespace {

struct GlobalOpts {
  unsigned workers = 0;  // 0 = hardware concurrency
  bool quiet = false;
  std::string format = "text";  // text | lines
};

std::string fmt_measure(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.7g", v);
  return buf;
}

std::string fmt_k(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

void header(const GlobalOpts& g, const std::string& what) {
  if (g.quiet) return;
  std::cerr << "# ctm " << ctm::kToolVersion << "\n# " << what << "\n";
}

unsigned effective_workers(const GlobalOpts& g) {
  if (g.workers > 0) return g.workers;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

char direction_char(int d) { return d == 0 ? '-' : (d < 0 ? 'L' : 'R'); }

std::string entry_str(const ctm::Instruction& ins) {
  std::string s = std::to_string(ins.next_state);
  s += ',';
  s += static_cast<char>('0' + ins.write_symbol);
  s += ',';
  s += direction_char(ins.direction);
  return s;
}

// ---- enumerate ----

void run_enumerate(const GlobalOpts& g, std::uint32_t states, std::uint64_t start,
                   std::uint64_t limit) {
  ctm::BigUint total = ctm::machine_count(states);
  header(g, "enumerate states=" + std::to_string(states) +
                " start=" + std::to_string(start) + " limit=" +
                std::to_string(limit) + " space=" + total.to_string());
  std::uint64_t count = total.fits_u64() ? total.to_u64() : UINT64_MAX;
  for (std::uint64_t i = 0; i < limit && start + i < count; ++i) {
    std::uint64_t t = start + i;
    ctm::Machine m = ctm::unrank(ctm::MachineIndex{states, t});
    if (g.format == "lines") {
      std::string row = "machine n=" + std::to_string(states) +
                        " t=" + std::to_string(t) + " entries=";
      for (std::size_t e = 0; e < m.transitions.size(); ++e) {
        if (e) row += ';';
        row += entry_str(m.transitions[e]);
      }
      std::cout << row << "\n";
    } else {
      std::cout << "machine n=" << states << " t=" << t << "\n";
      for (std::uint32_t s = 1; s <= states; ++s)
        for (int k = 0; k < 2; ++k) {
          const ctm::Instruction& ins = m.entry(s, static_cast<std::uint8_t>(k));
          std::cout << "  (" << s << "," << k << ") -> ("
                    << static_cast<int>(ins.next_state) << ","
                    << static_cast<int>(ins.write_symbol) << ","
                    << direction_char(ins.direction) << ")\n";
        }
    }
  }
}

// ---- simulate ----

void run_simulate(const GlobalOpts& g, std::uint32_t states, std::uint64_t index,
                  int blank, std::uint64_t max_steps) {
  header(g, "simulate states=" + std::to_string(states) + " index=" +
                std::to_string(index) + " blank=" + std::to_string(blank) +
                " max_steps=" + std::to_string(max_steps));
  ctm::Machine m = ctm::unrank(ctm::MachineIndex{states, index});
  ctm::SimOutcome oc = ctm::simulate(
      m, ctm::SimConfig{static_cast<std::uint8_t>(blank), max_steps});
  switch (oc.kind) {
    case ctm::SimOutcome::Kind::halted:
      std::cout << "outcome=halted output=" << oc.output << " steps=" << oc.steps
                << "\n";
      break;
    case ctm::SimOutcome::Kind::exhausted:
      std::cout << "outcome=exhausted steps=" << oc.steps << "\n";
      break;
    case ctm::SimOutcome::Kind::proved_non_halting:
      std::cout << "outcome=proved-non-halting\n";
      break;
  }
}

// ---- explore ----

std::map<std::uint32_t, std::uint64_t> parse_cutoffs(const std::string& spec) {
  std::map<std::uint32_t, std::uint64_t> out;
  if (spec.empty()) return out;
  std::istringstream is(spec);
  std::string item;
  while (std::getline(is, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--max-steps", "expected n=C[,n=C...]");
    out[static_cast<std::uint32_t>(std::stoul(item.substr(0, eq)))] =
        std::stoull(item.substr(eq + 1));
  }
  return out;
}

struct ExploreArgs {
  std::uint32_t max_states = 1;
  std::string mode = "full";
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::string max_steps_spec;
  std::string out_path;
  std::string resume_path;
  std::string checkpoint_path;
  std::uint64_t checkpoint_every = 0;
  std::int64_t stop_after_chunks = -1;
  std::uint64_t chunk_size = 1 << 16;
  bool no_blank_symmetry = false;
  bool no_prefilter = false;
};

void print_explore_summary(const ctm::CountsTable& t) {
  for (std::uint32_t n = 1; n <= t.plan.max_states; ++n)
    for (int b = 0; b < 2; ++b)
      std::cerr << "# examined." << n << "." << b << "="
                << t.stats[n - 1][b].examined << " halted." << n << "." << b
                << "=" << t.stats[n - 1][b].halted << "\n";
}

void run_explore(const GlobalOpts& g, const ExploreArgs& a) {
  ctm::ExploreOptions opts;
  opts.workers = effective_workers(g);
  opts.checkpoint_path = a.checkpoint_path;
  opts.checkpoint_every_chunks = a.checkpoint_every;
  if (a.stop_after_chunks >= 0)
    opts.stop_after_chunks = static_cast<std::uint64_t>(a.stop_after_chunks);

  ctm::CountsTable table;
  if (!a.resume_path.empty()) {
    if (opts.checkpoint_path.empty()) opts.checkpoint_path = a.resume_path;
    header(g, "explore resume=" + a.resume_path +
                  " workers=" + std::to_string(opts.workers));
    table = ctm::resume_explore(a.resume_path, opts);
  } else {
    ctm::ExplorationPlan plan = ctm::ExplorationPlan::full(a.max_states);
    if (a.mode == "sample") {
      plan.mode.assign(a.max_states, ctm::ExploreMode::sample);
      plan.samples.assign(a.max_states, a.samples);
    } else if (a.mode != "full") {
      throw CLI::ValidationError("--mode", "must be full or sample");
    }
    plan.seed = a.seed;
    plan.use_blank_symmetry = !a.no_blank_symmetry;
    plan.prefilter = !a.no_prefilter;
    plan.chunk_size = a.chunk_size;
    for (auto [n, c] : parse_cutoffs(a.max_steps_spec)) {
      if (n < 1 || n > a.max_states)
        throw CLI::ValidationError("--max-steps", "n out of range");
      plan.step_cutoff[n - 1] = c;
    }
    header(g, "explore " + plan.echo() + " workers=" + std::to_string(opts.workers));
    table = ctm::explore(plan, opts);
  }

  const bool partial = a.stop_after_chunks >= 0;
  if (partial) {
    if (!g.quiet)
      std::cerr << "# stopped early; progress saved to " << opts.checkpoint_path
                << "\n";
    return;
  }
  if (!g.quiet) print_explore_summary(table);
  if (a.out_path.empty())
    ctm::save_counts(table, std::cout);
  else
    ctm::save_counts(table, a.out_path);
}

// ---- measure files ----

void write_mk(const ctm::MkDistribution& d, std::ostream& os) {
  os << "ctm-measure v1\n";
  os << "meta kind=mk\n";
  os << "meta k=" << d.k << "\n";
  os << "meta exactness=" << ctm::to_string(d.exactness) << "\n";
  os << "meta provenance=" << d.provenance << "\n";
  os << "meta tool_version=" << ctm::kToolVersion << "\n";
  std::vector<std::pair<std::string, const ctm::Dyadic*>> order;
  order.reserve(d.entries.size());
  for (const auto& [s, v] : d.entries) order.emplace_back(s, &v);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return *b.second < *a.second; });
  for (const auto& [s, v] : order)
    os << s << " " << v->to_string() << " " << fmt_measure(v->to_double()) << " "
       << fmt_k(v->neg_log2()) << "\n";
}

void write_dk(const ctm::DkDistribution& d, std::ostream& os) {
  os << "ctm-measure v1\n";
  os << "meta kind=dk\n";
  os << "meta k=" << d.k << "\n";
  os << "meta exactness=" << ctm::to_string(d.exactness) << "\n";
  os << "meta provenance=" << d.provenance << "\n";
  os << "meta tool_version=" << ctm::kToolVersion << "\n";
  std::vector<std::pair<std::string, std::uint64_t>> order(d.counts.begin(),
                                                           d.counts.end());
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return b.second < a.second; });
  for (const auto& [s, c] : order) {
    double v = static_cast<double>(c) / static_cast<double>(d.halting_total);
    os << s << " " << c << "/" << d.halting_total << " " << fmt_measure(v) << " "
       << fmt_k(ctm::coding_theorem_k(v)) << "\n";
  }
}

struct LoadedMeasure {
  std::string kind;
  std::uint32_t k = 0;
  std::map<std::string, double, ctm::OutputOrder> values;
};

double parse_exact_field(const std::string& field) {
  auto slash = field.find('/');
  if (slash == std::string::npos)
    throw std::runtime_error("measure file: malformed exact field " + field);
  std::string num = field.substr(0, slash);
  std::string den = field.substr(slash + 1);
  if (den.rfind("2^", 0) == 0) {
    ctm::BigUint n(ctm::detail::parse_u64(num, "measure numerator"));
    return ctm::Dyadic(n, ctm::detail::parse_u64(den.substr(2), "measure exponent"))
        .to_double();
  }
  return static_cast<double>(ctm::detail::parse_u64(num, "measure numerator")) /
         static_cast<double>(ctm::detail::parse_u64(den, "measure denominator"));
}

LoadedMeasure load_measure(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line) || line != "ctm-measure v1")
    throw std::runtime_error("measure file: unsupported version");
  LoadedMeasure out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("meta ", 0) == 0) {
      auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("measure file: malformed meta line");
      std::string key = line.substr(5, eq - 5);
      std::string value = line.substr(eq + 1);
      if (key == "kind") out.kind = value;
      if (key == "k")
        out.k = static_cast<std::uint32_t>(ctm::detail::parse_u64(value, "k"));
      continue;
    }
    std::istringstream ls(line);
    std::string s, exact, flt, kval;
    if (!(ls >> s >> exact >> flt >> kval))
      throw std::runtime_error("measure file: malformed entry line");
    out.values[s] = parse_exact_field(exact);
  }
  if (out.kind.empty()) throw std::runtime_error("measure file: missing kind");
  return out;
}

void run_measure(const GlobalOpts& g, const std::string& counts_path,
                 const std::string& kind, const std::string& out_path) {
  ctm::CountsTable t = ctm::load_counts(counts_path);
  header(g, "measure kind=" + kind + " " + t.plan.echo());
  std::ostringstream body;
  if (kind == "mk")
    write_mk(ctm::compute_mk(t), body);
  else if (kind == "dk")
    write_dk(ctm::compute_dk(t), body);
  else
    throw CLI::ValidationError("--kind", "must be mk or dk");
  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream os(out_path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open for writing: " + out_path);
    os << body.str();
  }
}

void run_complexity(const GlobalOpts& g, const std::string& counts_path,
                    const std::string& s, const std::string& kind) {
  ctm::CountsTable t = ctm::load_counts(counts_path);
  header(g, "complexity string=" + s + " kind=" + kind + " " + t.plan.echo());
  std::optional<double> k;
  std::string exact;
  double measure = 0;
  if (kind == "mk") {
    ctm::MkDistribution d = ctm::compute_mk(t);
    k = ctm::complexity(d, s);
    if (k) {
      exact = d.find(s)->to_string();
      measure = d.find(s)->to_double();
    }
  } else if (kind == "dk") {
    ctm::DkDistribution d = ctm::compute_dk(t);
    k = ctm::complexity(d, s);
    if (k) {
      exact = std::to_string(d.counts.at(s)) + "/" + std::to_string(d.halting_total);
      measure = d.value(s);
    }
  } else {
    throw CLI::ValidationError("--kind", "must be mk or dk");
  }
  if (!k) {
    std::cout << "K=no-estimate string=" << s
              << " note=absent-from-table-(cutoff-limited,-not-probability-0)\n";
    return;
  }
  std::cout << "K=" << fmt_k(*k) << " measure=" << fmt_measure(measure)
            << " exact=" << exact << " string=" << s << "\n";
}

void run_compare(const GlobalOpts& g, const std::string& a_path,
                 const std::string& b_path, std::uint64_t top) {
  LoadedMeasure a = load_measure(a_path);
  LoadedMeasure b = load_measure(b_path);
  header(g, "compare a=" + a_path + " b=" + b_path);
  ctm::RankComparison cmp = ctm::rank_compare(a.values, b.values);
  std::cout << "spearman_rho=" << fmt_measure(cmp.spearman_rho)
            << " n_common=" << cmp.n_common << "\n";
  const std::string ka = "K_" + a.kind + std::to_string(a.k);
  const std::string kb = "K_" + b.kind + std::to_string(b.k);
  if (g.format == "lines") {
    for (std::size_t i = 0; i < cmp.table.size() && i < top; ++i) {
      const ctm::RankRow& row = cmp.table[i];
      std::cout << "rank=" << (i + 1) << " s=" << row.output
                << " Ka=" << fmt_k(row.k_a) << " Kb=" << fmt_k(row.k_b) << "\n";
    }
  } else {
    std::cout << "s\t" << ka << "\t" << kb << "\n";
    for (std::size_t i = 0; i < cmp.table.size() && i < top; ++i) {
      const ctm::RankRow& row = cmp.table[i];
      std::cout << row.output << "\t" << fmt_k(row.k_a) << "\t" << fmt_k(row.k_b)
                << "\n";
    }
  }
}

// ---- decode ----

void run_decode(const GlobalOpts& g, const std::string& bits) {
  header(g, "decode bits=" + bits);
  ctm::StreamDecodeResult r = ctm::decode_stream(bits);
  for (const auto& item : r.items) {
    if (std::holds_alternative<ctm::Program>(item)) {
      const ctm::Program& p = std::get<ctm::Program>(item);
      std::cout << "program n=" << p.states << " blank=" << int(p.blank)
                << " t=" << p.index.to_string() << "\n";
    } else {
      const ctm::TrivialNonHalting& p = std::get<ctm::TrivialNonHalting>(item);
      std::cout << "trivial-non-halting n=" << p.states
                << " blank=" << int(p.blank) << " t=" << p.index.to_string()
                << "\n";
    }
  }
  if (!r.remainder) {
    std::cout << "remainder=none\n";
  } else if (r.remainder->bits_needed) {
    std::cout << "remainder=incomplete bits_needed=" << *r.remainder->bits_needed
              << "\n";
  } else {
    std::cout << "remainder=incomplete bits_needed=unbounded\n";
  }
}

// ---- bounds ----

void run_bounds(const GlobalOpts& g, std::uint32_t k, std::uint64_t cut) {
  header(g, "bounds k=" + std::to_string(k) + " cut=" + std::to_string(cut));
  ctm::BoundReport r = ctm::bound_report(k, cut);
  if (g.format != "lines") {
    std::printf("%-22s %u\n", "k", r.k);
    std::printf("%-22s %llu\n", "cut",
                static_cast<unsigned long long>(r.cut_point));
    std::printf("%-22s %s\n", "tail_bound", fmt_measure(r.tail_bound).c_str());
    std::printf("%-22s %s\n", "m0_exact_series",
                fmt_measure(r.m0_exact_series).c_str());
    std::printf("%-22s %s\n", "m0_at_k", fmt_measure(r.m0_at_k).c_str());
    std::printf("%-22s %s\n", "m0_abs_error_at_k",
                fmt_measure(r.m0_abs_error_at_k).c_str());
    std::printf("%-22s %s\n", "refined_tail_bound",
                fmt_measure(r.refined_tail_bound).c_str());
    std::printf("\n");
  }
  // key=value block, sorted keys
  std::cout << "cut=" << r.cut_point << "\n";
  std::cout << "k=" << r.k << "\n";
  std::cout << "m0_abs_error_at_k=" << fmt_measure(r.m0_abs_error_at_k) << "\n";
  std::cout << "m0_at_k=" << fmt_measure(r.m0_at_k) << "\n";
  std::cout << "m0_exact_series=" << fmt_measure(r.m0_exact_series) << "\n";
  std::cout << "refined_tail_bound=" << fmt_measure(r.refined_tail_bound) << "\n";
  std::cout << "tail_bound=" << fmt_measure(r.tail_bound) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"computable algorithmic-probability measures over (n,2) Busy "
               "Beaver machines"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--workers", g.workers, "worker threads (0 = hardware)");
  app.add_flag("--quiet", g.quiet, "suppress the reproducibility header");
  app.add_option("--format", g.format, "text|lines")
      ->check(CLI::IsMember({"text", "lines"}));

  // enumerate
  auto* c_enum = app.add_subcommand("enumerate", "print machines by index");
  std::uint32_t en_states = 1;
  std::uint64_t en_start = 0, en_limit = 10;
  c_enum->add_option("--states", en_states, "state count n")->required();
  c_enum->add_option("--start", en_start, "first index");
  c_enum->add_option("--limit", en_limit, "how many machines");

  // simulate
  auto* c_sim = app.add_subcommand("simulate", "run one machine on a blank tape");
  std::uint32_t si_states = 1;
  std::uint64_t si_index = 0, si_steps = 500;
  int si_blank = 0;
  c_sim->add_option("--states", si_states)->required();
  c_sim->add_option("--index", si_index)->required();
  c_sim->add_option("--blank", si_blank)->check(CLI::Range(0, 1));
  c_sim->add_option("--max-steps", si_steps);

  // explore
  auto* c_exp = app.add_subcommand("explore", "sweep machine spaces into a counts file");
  ExploreArgs ea;
  c_exp->add_option("--max-states", ea.max_states, "largest n to sweep");
  c_exp->add_option("--mode", ea.mode, "full|sample");
  c_exp->add_option("--samples", ea.samples, "samples per space (sample mode)");
  c_exp->add_option("--seed", ea.seed, "sampling seed");
  c_exp->add_option("--max-steps", ea.max_steps_spec, "per-n cutoffs, n=C[,n=C...]");
  c_exp->add_option("--out", ea.out_path, "counts file (stdout if omitted)");
  c_exp->add_option("--resume", ea.resume_path, "resume from a checkpoint file");
  c_exp->add_option("--checkpoint", ea.checkpoint_path, "checkpoint file");
  c_exp->add_option("--checkpoint-every", ea.checkpoint_every,
                    "checkpoint every N merged chunks");
  c_exp->add_option("--stop-after-chunks", ea.stop_after_chunks,
                    "merge N chunks, checkpoint, and stop (for bounded sessions)");
  c_exp->add_option("--chunk-size", ea.chunk_size, "ranks per work chunk");
  c_exp->add_flag("--no-blank-symmetry", ea.no_blank_symmetry,
                  "simulate both blanks instead of deriving blank 1");
  c_exp->add_flag("--no-prefilter", ea.no_prefilter,
                  "simulate trivially non-halting machines too");

  // measure
  auto* c_meas = app.add_subcommand("measure", "compute m_k or D(k) from counts");
  std::string me_counts, me_kind = "mk", me_out;
  c_meas->add_option("--counts", me_counts)->required();
  c_meas->add_option("--kind", me_kind, "mk|dk")
      ->check(CLI::IsMember({"mk", "dk"}));
  c_meas->add_option("--out", me_out, "measure file (stdout if omitted)");

  // complexity
  auto* c_cplx = app.add_subcommand("complexity", "K(s) for one string");
  std::string cx_counts, cx_string, cx_kind = "mk";
  c_cplx->add_option("--counts", cx_counts)->required();
  c_cplx->add_option("--string", cx_string)->required();
  c_cplx->add_option("--kind", cx_kind, "mk|dk")
      ->check(CLI::IsMember({"mk", "dk"}));

  // compare
  auto* c_cmp = app.add_subcommand("compare", "rank two measure files");
  std::string cm_a, cm_b;
  std::uint64_t cm_top = 10;
  c_cmp->add_option("--a", cm_a)->required();
  c_cmp->add_option("--b", cm_b)->required();
  c_cmp->add_option("--top", cm_top, "rows in the ranking table");

  // decode
  auto* c_dec = app.add_subcommand("decode", "parse a bit string into programs");
  std::string de_bits;
  c_dec->add_option("--bits", de_bits)->required();

  // bounds
  auto* c_bnd = app.add_subcommand("bounds", "analytic error bounds");
  std::uint32_t bo_k = 5;
  std::uint64_t bo_cut = 2000;
  c_bnd->add_option("--k", bo_k)->required();
  c_bnd->add_option("--cut", bo_cut, "series cut point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*c_enum) run_enumerate(g, en_states, en_start, en_limit);
    if (*c_sim) run_simulate(g, si_states, si_index, si_blank, si_steps);
    if (*c_exp) run_explore(g, ea);
    if (*c_meas) run_measure(g, me_counts, me_kind, me_out);
    if (*c_cplx) run_complexity(g, cx_counts, cx_string, cx_kind);
    if (*c_cmp) run_compare(g, cm_a, cm_b, cm_top);
    if (*c_dec) run_decode(g, de_bits);
    if (*c_bnd) run_bounds(g, bo_k, bo_cut);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
