#include "ffa/cli.hpp"

#include "ffa/cost_model.hpp"
#include "ffa/factorization.hpp"
#include "ffa/numeric.hpp"
#include "ffa/polyphase.hpp"
#include "ffa/simulator.hpp"
#include "ffa/structure_graph.hpp"
#include "ffa/synthesis.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <unistd.h>

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

namespace ffa {

namespace {

using json = nlohmann::ordered_json;

struct Options {
  std::string scheme = "iterated";
  std::string levels;
  std::string form = "direct-plus";
  std::string share;
  std::string netlist;
  std::string taps;
  std::size_t len = 0;
  std::size_t trials = 100;
  std::optional<std::uint64_t> seed;
  bool float_mode = false;
  bool pad = false;
  std::string input;
  bool binary = false;
  std::string out_path;
  std::string dot_path;
  std::string output_path;
  bool csv = false;
  bool reconcile = false;
  bool json_report = false;
};

std::size_t parse_size(std::string_view text, const char* what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw UsageError(std::string(what) + ": expected a non-negative integer, got '" + std::string(text) + "'");
  return v;
}

std::vector<std::size_t> parse_level_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_size(item, "-n"));
  if (out.empty()) throw UsageError("-n: empty list");
  return out;
}

std::string read_file(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << content;
}

/// Numbers separated by whitespace or commas; '#' starts a comment.
std::vector<Rational> parse_values(const std::string& text) {
  std::vector<Rational> values;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream words(line);
    std::string w;
    while (words >> w) {
      try {
        values.push_back(parse_rational(w));
      } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("bad sample value: ") + e.what());
      }
    }
  }
  return values;
}

std::vector<Rational> parse_binary_values(const std::string& bytes) {
  if (bytes.size() % 8 != 0) throw FormatError("binary sample file size is not a multiple of 8 bytes");
  std::vector<Rational> values;
  for (std::size_t i = 0; i < bytes.size(); i += 8) {
    std::uint64_t u = 0;
    for (int b = 7; b >= 0; --b) u = (u << 8) | static_cast<unsigned char>(bytes[i + b]);
    values.emplace_back(static_cast<std::int64_t>(u));
  }
  return values;
}

std::vector<Rational> random_values(std::size_t count, std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<int> dist(-8, 8);
  std::vector<Rational> values(count);
  for (auto& v : values) v = dist(rng);
  return values;
}

constexpr std::uint64_t kTapStream = 1;
constexpr std::uint64_t kInputStream = 2;

std::uint64_t require_seed(const Options& o, const char* what) {
  if (!o.seed) throw UsageError(std::string(what) + " requires --seed");
  return *o.seed;
}

std::vector<Rational> load_taps(const Options& o, std::size_t parallelism) {
  if (o.taps.empty()) throw UsageError("--taps is required");
  if (o.taps == "random") {
    const std::size_t n = o.len ? o.len : 4 * parallelism;
    return random_values(n, require_seed(o, "--taps random"), kTapStream);
  }
  std::vector<Rational> taps =
      o.taps.rfind("file:", 0) == 0 ? parse_values(read_file(o.taps.substr(5))) : parse_values(o.taps);
  if (taps.empty()) throw ShapeError("empty tap sequence");
  return taps;
}

std::vector<Int> to_int(const std::vector<Rational>& values) {
  std::vector<Int> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(numerator(v));
  return out;
}

std::vector<double> to_double(const std::vector<Rational>& values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(static_cast<double>(v));
  return out;
}

/// Rational taps scaled by the LCM of their denominators.
std::vector<Int> scaled_to_int(const std::vector<Rational>& values) {
  Int lcm = 1;
  for (const auto& v : values) lcm = boost::multiprecision::lcm(lcm, denominator(v));
  std::vector<Int> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(numerator(v) * (lcm / denominator(v)));
  return out;
}

Scheme scheme_from(const Options& o) {
  Scheme s;
  if (o.scheme == "iterated") s.kind = SchemeKind::IteratedFfa;
  else if (o.scheme == "hybrid") s.kind = SchemeKind::Hybrid;
  else if (o.scheme == "naive") s.kind = SchemeKind::NaiveBlocked;
  else throw UsageError("unknown scheme '" + o.scheme + "' (iterated, hybrid, naive)");
  if (o.levels.empty()) throw UsageError("-n is required");
  s.levels = parse_size(o.levels, "-n");
  if (s.kind != SchemeKind::NaiveBlocked && s.levels < 1) throw UsageError("-n must be at least 1");
  s.form = parse_form(o.form);
  return s;
}

/// With --pad, zero-extends taps to a multiple of L (with a warning);
/// otherwise the synthesizer or simulator reports the shape error.
std::vector<Rational> padded_taps(const Options& o, std::vector<Rational> taps, std::size_t L, std::ostream& err) {
  if (!o.pad || taps.size() % L == 0) return taps;
  const std::size_t to = (taps.size() + L - 1) / L * L;
  err << "warning: zero-padding " << taps.size() << " taps to " << to << "\n";
  taps.resize(to, Rational(0));
  return taps;
}

/// Graph from --netlist, or synthesized from --scheme/-n/--form/--share.
StructureGraph load_graph(const Options& o, std::size_t tap_count = 0) {
  StructureGraph g;
  if (!o.netlist.empty()) {
    g = import_json(read_file(o.netlist));
  } else {
    g = synthesize(scheme_from(o), tap_count);
  }
  if (!o.share.empty()) g = share_substructures(g, parse_share_region(o.share));
  return g;
}

json counts_json(const CostReport& c) {
  return json{{"additions", c.additions},
              {"delays", c.delay_elements},
              {"subfilters", c.subfilters},
              {"multiplications", c.multiplications}};
}

json report_base(const std::string& command, const StructureGraph& g, const std::optional<std::uint64_t>& seed) {
  json r;
  r["command"] = command;
  r["seed"] = seed ? json(*seed) : json(nullptr);
  r["scheme"] = g.scheme();
  r["n"] = g.levels();
  r["counts"] = counts_json(count_costs(g));
  r["match"] = nullptr;
  r["max_abs_diff"] = nullptr;
  r["trials"] = 0;
  return r;
}

bool color_enabled(std::ostream& err) {
  if (const char* env = std::getenv("FFA_COLOR")) {
    const std::string v = env;
    if (v == "0" || v == "never" || v == "off" || v == "false") return false;
    if (v == "1" || v == "always" || v == "on" || v == "true") return true;
  }
  return err.rdbuf() == std::cerr.rdbuf() && ::isatty(STDERR_FILENO);
}

std::string status_word(bool pass, bool color) {
  if (!color) return pass ? "PASS" : "FAIL";
  return pass ? "\033[32mPASS\033[0m" : "\033[31mFAIL\033[0m";
}

std::string format_value(const Rational& v) { return to_string(v); }
std::string format_value(const Int& v) { return v.str(); }
std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------- synth

int cmd_synth(const Options& o, std::ostream& out) {
  std::size_t tap_count = 0;
  std::optional<std::uint64_t> seed = o.seed;
  if (!o.taps.empty()) {
    const Scheme s = o.netlist.empty() ? scheme_from(o) : Scheme{};
    tap_count = load_taps(o, o.netlist.empty() ? s.parallelism() : 1).size();
  }
  const StructureGraph g = load_graph(o, tap_count);
  if (!o.out_path.empty()) write_file(o.out_path, export_json(g));
  if (!o.dot_path.empty()) write_file(o.dot_path, export_dot(g));
  const CostReport c = count_costs(g);
  if (o.json_report) {
    out << report_base("synth", g, seed).dump(2) << "\n";
  } else {
    out << g.scheme() << " n=" << g.levels() << " L=" << g.parallelism() << ": " << c.additions << " additions, "
        << c.delay_elements << " delays, " << c.subfilters << " subfilters\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const std::uint64_t seed = o.seed.value_or(0);
  std::size_t L = 0;
  if (o.netlist.empty()) L = scheme_from(o).parallelism();
  else L = import_json(read_file(o.netlist)).parallelism();
  const std::vector<Rational> taps = padded_taps(o, load_taps(o, L), L, err);
  const StructureGraph g = load_graph(o, o.netlist.empty() ? taps.size() : 0);

  const bool integral = all_integral(taps);
  EquivalenceReport eq;
  std::string mode;
  if (o.float_mode) {
    mode = "float";
    eq = verify_equivalence(g, to_double(taps), o.trials, seed);
  } else if (integral) {
    mode = "exact-integer";
    eq = verify_equivalence(g, to_int(taps), o.trials, seed);
  } else {
    mode = "exact-rational";
    eq = verify_equivalence(g, taps, o.trials, seed);
  }

  std::optional<bool> transfer;
  if (g.levels() <= 3) {
    const std::vector<Int> h = scaled_to_int(taps);
    transfer = transfer_of_graph(g, h) == pseudocirculant(h, g.parallelism());
  }
  const bool pass = eq.pass && transfer.value_or(true);

  json r = report_base("verify", g, seed);
  r["match"] = pass;
  r["max_abs_diff"] = eq.max_abs_diff;
  r["trials"] = eq.trials;
  r["input_len"] = eq.input_len;
  r["tap_count"] = taps.size();
  r["mode"] = mode;
  r["transfer_matrix"] = transfer ? json(*transfer ? "match" : "mismatch") : json("skipped");
  out << r.dump(2) << "\n";
  err << "verify " << g.scheme() << " n=" << g.levels() << ": " << status_word(pass, color_enabled(err)) << "\n";
  return pass ? kExitOk : kExitVerifyFailed;
}

// ---------------------------------------------------------------- cost

int cmd_cost(const Options& o, std::ostream& out) {
  const std::vector<std::size_t> levels = parse_level_list(o.levels.empty() ? "4,6,8" : o.levels);
  for (std::size_t n : levels)
    if (n < 1 || n > kMaxCostLevels)
      throw UsageError("-n must be in 1.." + std::to_string(kMaxCostLevels) + ", got " + std::to_string(n));
  std::vector<TableRow> rows = comparison_table(levels);
  if (!o.scheme.empty()) {
    const CostScheme keep = parse_cost_scheme(o.scheme);
    if (o.reconcile && keep == CostScheme::FastConvolution)
      throw UsageError("fast-convolution has no graph construction to reconcile against");
    std::erase_if(rows, [&](const TableRow& r) { return r.costs.scheme != keep; });
  }
  if (o.reconcile) attach_reconciliation(rows);
  out << (o.csv ? render_csv(rows) : render_text(rows));
  if (!o.out_path.empty()) write_file(o.out_path, render_csv(rows));
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

std::vector<Rational> load_input(const Options& o) {
  if (o.input.empty()) throw UsageError("--input is required");
  const auto colon = o.input.find(':');
  if (colon == std::string::npos) throw UsageError("--input expects impulse:LEN, zeros:LEN, random:LEN or file:PATH");
  const std::string kind = o.input.substr(0, colon);
  const std::string arg = o.input.substr(colon + 1);
  if (kind == "file") return o.binary ? parse_binary_values(read_file(arg, true)) : parse_values(read_file(arg));
  const std::size_t len = parse_size(arg, "--input length");
  if (kind == "impulse") {
    std::vector<Rational> x(len, Rational(0));
    if (len) x[0] = 1;
    return x;
  }
  if (kind == "zeros") return std::vector<Rational>(len, Rational(0));
  if (kind == "random") return random_values(len, require_seed(o, "--input random"), kInputStream);
  throw UsageError("unknown input kind '" + kind + "'");
}

template <class T>
std::string encode_samples(const std::vector<T>& y, bool binary) {
  std::string out;
  if (!binary) {
    for (const auto& v : y) out += format_value(v) + "\n";
    return out;
  }
  for (const auto& v : y) {
    std::int64_t s = 0;
    if constexpr (std::is_same_v<T, double>) {
      s = static_cast<std::int64_t>(v);
      if (static_cast<double>(s) != v) throw ShapeError("output sample not representable as int64");
    } else {
      Int i;
      if constexpr (std::is_same_v<T, Rational>) {
        if (denominator(v) != 1) throw ShapeError("non-integral output sample cannot be written in binary");
        i = numerator(v);
      } else {
        i = v;
      }
      if (i > std::numeric_limits<std::int64_t>::max() || i < std::numeric_limits<std::int64_t>::min())
        throw ShapeError("output sample exceeds int64 range");
      s = static_cast<std::int64_t>(i);
    }
    const auto u = static_cast<std::uint64_t>(s);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((u >> (8 * b)) & 0xff));
  }
  return out;
}

template <class T>
void write_block(std::ostream& os, const std::vector<T>& y, std::size_t block, std::size_t L) {
  for (std::size_t p = 0; p < L; ++p) os << (p ? " " : "") << format_value(y[block * L + p]);
}

template <class T>
int simulate_typed(const Options& o, const StructureGraph& g, const std::vector<T>& h, const std::vector<T>& x,
                   std::ostream& out, std::ostream& err) {
  const std::vector<T> y = simulate(g, h, x);
  const std::size_t L = g.parallelism();
  const std::string encoded = encode_samples(y, o.binary);
  std::ostream& summary = o.output_path.empty() ? err : out;
  if (!o.output_path.empty()) write_file(o.output_path, encoded, o.binary);
  else out << encoded;
  const std::size_t blocks = y.size() / L;
  summary << g.scheme() << " n=" << g.levels() << " L=" << L << ": " << y.size() << " samples, " << blocks
          << " blocks";
  if (o.seed) summary << ", seed " << *o.seed;
  summary << "\n";
  if (blocks) {
    summary << "first block: ";
    write_block(summary, y, 0, L);
    summary << "\nlast block: ";
    write_block(summary, y, blocks - 1, L);
    summary << "\n";
  }
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  std::size_t L = 0;
  if (o.netlist.empty()) L = scheme_from(o).parallelism();
  else L = import_json(read_file(o.netlist)).parallelism();
  const std::vector<Rational> taps = padded_taps(o, load_taps(o, L), L, err);
  const StructureGraph g = load_graph(o, o.netlist.empty() ? taps.size() : 0);
  std::vector<Rational> x = load_input(o);
  if (x.size() % L != 0) {
    if (!o.pad)
      throw ShapeError("input length " + std::to_string(x.size()) + " is not a multiple of L = " + std::to_string(L) +
                       " (use --pad)");
    x.resize((x.size() + L - 1) / L * L, Rational(0));
  }
  if (o.float_mode) return simulate_typed(o, g, to_double(taps), to_double(x), out, err);
  if (all_integral(taps) && all_integral(x)) return simulate_typed(o, g, to_int(taps), to_int(x), out, err);
  return simulate_typed(o, g, taps, x, out, err);
}

void add_graph_options(CLI::App* sub, Options& o) {
  sub->add_option("--scheme", o.scheme, "iterated, hybrid or naive");
  sub->add_option("-n,--levels", o.levels, "Number of 2-parallel levels (L = 2^n)");
  sub->add_option("--form", o.form, "direct-plus, direct-minus, transposed-plus or transposed-minus");
  sub->add_option("--share", o.share, "Run substructure sharing: input, output or both");
  sub->add_option("--netlist", o.netlist, "Load a JSON netlist instead of synthesizing");
}

void add_tap_options(CLI::App* sub, Options& o) {
  sub->add_option("--taps", o.taps, "random, file:PATH, or an inline list such as 1,2,3,4");
  sub->add_option("--len", o.len, "Tap count for --taps random (default 4L)");
  sub->add_option("--seed", o.seed, "Seed for random taps and inputs");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Fast parallel FIR structure synthesis and verification", "ffa"};
  app.require_subcommand(1);

  CLI::App* synth = app.add_subcommand("synth", "Synthesize a structure and export it");
  add_graph_options(synth, o);
  add_tap_options(synth, o);
  synth->add_option("--out", o.out_path, "JSON netlist output path");
  synth->add_option("--dot", o.dot_path, "Graphviz output path");
  synth->add_flag("--json", o.json_report, "Print a JSON report instead of a summary line");

  CLI::App* verify = app.add_subcommand("verify", "Check a structure against the convolution oracle");
  add_graph_options(verify, o);
  add_tap_options(verify, o);
  verify->add_option("--trials", o.trials, "Random input vectors (default 100)");
  verify->add_flag("--float", o.float_mode, "Double precision with 1e-9 relative tolerance");
  verify->add_flag("--pad", o.pad, "Zero-pad the taps to a multiple of L");

  CLI::App* cost = app.add_subcommand("cost", "Adder and delay counts by formula");
  cost->add_option("-n,--levels", o.levels, "Comma-separated list of n (default 4,6,8)");
  cost->add_option("--scheme", o.scheme, "Only rows for fast-convolution, iterated or hybrid");
  cost->add_flag("--csv", o.csv, "CSV instead of an aligned table");
  cost->add_flag("--reconcile", o.reconcile, "Add counts taken from synthesized graphs");
  cost->add_option("--out", o.out_path, "Also write the CSV to this path");

  CLI::App* sim = app.add_subcommand("simulate", "Filter a sample stream through a structure");
  add_graph_options(sim, o);
  add_tap_options(sim, o);
  sim->add_option("--input", o.input, "impulse:LEN, zeros:LEN, random:LEN or file:PATH");
  sim->add_option("--output", o.output_path, "Output sample path (default stdout)");
  sim->add_flag("--binary", o.binary, "Little-endian int64 records for file input and output");
  sim->add_flag("--pad", o.pad, "Zero-pad taps and input to whole blocks");
  sim->add_flag("--float", o.float_mode, "Double precision arithmetic");

  std::vector<const char*> argv{"ffa"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    // cost's --scheme has no default; the graph commands default to iterated
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (cost->parsed()) {
      if (cost->count("--scheme") == 0) o.scheme.clear();
      return cmd_cost(o, out);
    }
    if (synth->parsed()) return cmd_synth(o, out);
    if (verify->parsed()) return cmd_verify(o, out, err);
    return cmd_simulate(o, out, err);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace ffa
