#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "mppc/bessel.hpp"
#include "mppc/energy.hpp"
#include "mppc/errors.hpp"
#include "mppc/experiments.hpp"
#include "mppc/gcdsum.hpp"
#include "mppc/paircorr.hpp"
#include "mppc/sequences.hpp"

namespace mppc::cli {

namespace {

using Json = nlohmann::ordered_json;

struct OptionSpec {
  std::string key;
  std::string fallback;
  std::string help;
  bool required = false;
};

struct CommandSpec {
  std::string name;
  std::string help;
  std::vector<OptionSpec> options;
};

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = {
      {"stat",
       "Pair correlation statistic of one orbit",
       {{"family", "", "sequence family, e.g. n,n^2", true},
        {"N", "", "number of points", true},
        {"s", "1", "scale s > 0"},
        {"norm", "sup", "sup or two"},
        {"alpha", "", "comma-separated dilation; sampled from --seed when empty"},
        {"seed", "0", "master seed"},
        {"counter", "grid", "grid or naive"}}},
      {"energy",
       "Additive or joint additive energy over an N grid (CSV)",
       {{"family", "", "one sequence (energy) or several (joint energy)", true},
        {"N", "", "N grid: list or a..b (doubling)", true},
        {"compare", "N^2,N^3", "comparison functions N^p*log^q"},
        {"budget", "16777216", "keys held in memory per counting pass"}}},
      {"gcdsum",
       "GCD sum of a weighted support or of a family's representation function",
       {{"alpha", "0.5", "exponent in (0, 1]"},
        {"support", "", "support file: d integers then optional re [im] per line"},
        {"dim", "1", "dimension of the support file"},
        {"family", "", "family whose representation function is the weight"},
        {"N", "", "number of terms of the family"}}},
      {"bessel",
       "Bessel function J_nu(t) and optional torus Fourier coefficients",
       {{"nu", "", "order in [0, 5]", true},
        {"t", "", "argument in [0, 1e4]", true},
        {"coeff", "", "ball or box: also evaluate a Fourier coefficient"},
        {"r", "", "frequency vector for --coeff"},
        {"s", "1", "scale for --coeff"},
        {"N", "100", "N for --coeff"}}},
      {"experiment",
       "Monte Carlo experiments over random alpha (CSV)",
       {{"kind", "convergence", "convergence, variance, counterexample or moments"},
        {"family", "n,n^2", "sequence family"},
        {"norm", "sup", "sup or two"},
        {"s", "0.5,1,2", "scales"},
        {"N", "1000,10000,100000", "N grid"},
        {"K", "20", "alpha samples per cell"},
        {"seed", "0", "master seed"},
        {"alpha", "", "fixed alpha (counterexample) or zeta exponent (moments)"},
        {"l", "1,2,3", "moment orders (moments)"},
        {"M", "1000", "zeta truncation (moments)"},
        {"samples", "10000", "random samples (moments)"},
        {"timing", "false", "record wall time per row"},
        {"spot_check", "false", "recount 10% of cells with the naive counter"}}},
      {"verify-eq0",
       "Monte Carlo check of the random-model GCD identity",
       {{"pairs", "1:1,1:2,2:1,2:2", "support pairs a:b with weight 1"},
        {"support", "", "support file (d = 2) overriding --pairs"},
        {"alpha", "0.75", "exponent > 1/2"},
        {"M", "200", "truncation cutoff"},
        {"samples", "10000", "Monte Carlo samples"},
        {"seed", "0", "master seed"}}},
  };
  return specs;
}

const CommandSpec& find_command(const std::string& name) {
  for (const auto& spec : command_specs())
    if (spec.name == name) return spec;
  throw std::invalid_argument("unknown command '" + name + "'");
}

struct Runtime {
  std::string out_path;
  std::string summary_path;
  std::size_t workers = 1;
};

// ---------------------------------------------------------------- parsing

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    auto end = text.find(sep, begin);
    if (end == std::string_view::npos) end = text.size();
    if (auto piece = trim(text.substr(begin, end - begin)); !piece.empty())
      out.emplace_back(piece);
    begin = end + 1;
  }
  return out;
}

double parse_real(std::string_view text, const std::string& what) {
  const std::string s(trim(text));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || !std::isfinite(v))
    throw std::invalid_argument("--" + what + ": cannot parse '" + s + "' as a real");
  return v;
}

std::uint64_t parse_count(std::string_view text, const std::string& what) {
  const double v = parse_real(text, what);
  if (v < 0 || v != std::floor(v) || v > 9.007199254740992e15)
    throw std::invalid_argument("--" + what + ": '" + std::string(text) +
                                "' is not a nonnegative integer");
  return static_cast<std::uint64_t>(v);
}

std::uint64_t parse_seed(std::string_view text) {
  const std::string s(trim(text));
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || s.front() == '-')
    throw std::invalid_argument("--seed: '" + s + "' is not a 64-bit unsigned integer");
  return v;
}

bool parse_bool(std::string_view text, const std::string& what) {
  const auto s = trim(text);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no" || s.empty()) return false;
  throw std::invalid_argument("--" + what + ": expected true or false");
}

std::vector<double> parse_reals(std::string_view text, const std::string& what) {
  std::vector<double> out;
  for (const auto& piece : split(text, ',')) out.push_back(parse_real(piece, what));
  if (out.empty()) throw std::invalid_argument("--" + what + ": empty list");
  return out;
}

/// `a,b,c` or `a..b` (doubling from a while <= b).
std::vector<std::size_t> parse_grid(std::string_view text, const std::string& what) {
  std::vector<std::size_t> out;
  if (auto dots = text.find(".."); dots != std::string_view::npos) {
    const auto lo = parse_count(text.substr(0, dots), what);
    const auto hi = parse_count(text.substr(dots + 2), what);
    if (lo == 0 || hi < lo) throw std::invalid_argument("--" + what + ": bad range");
    for (std::uint64_t n = lo; n <= hi; n *= 2) out.push_back(n);
    return out;
  }
  for (const auto& piece : split(text, ','))
    out.push_back(static_cast<std::size_t>(parse_count(piece, what)));
  if (out.empty()) throw std::invalid_argument("--" + what + ": empty list");
  return out;
}

std::vector<std::int64_t> parse_ints(std::string_view text, const std::string& what) {
  std::vector<std::int64_t> out;
  for (const auto& piece : split(text, ',')) {
    const double v = parse_real(piece, what);
    if (v != std::floor(v)) throw std::invalid_argument("--" + what + ": expected integers");
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

std::string json_scalar_to_string(const Json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) return format_real(v.get<double>());
  throw std::invalid_argument("config key '" + key + "' must be a string, number or boolean");
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
  }
}

/// Config file values, then flags, then defaults; keys in declaration order.
Json resolve(const CommandSpec& spec, const Json& file_values,
             const std::map<std::string, std::string>& flags) {
  std::map<std::string, std::string> values;
  if (!file_values.is_null()) {
    if (!file_values.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (const auto& [key, v] : file_values.items()) {
      const bool known = std::any_of(spec.options.begin(), spec.options.end(),
                                     [&](const OptionSpec& o) { return o.key == key; });
      if (!known)
        throw std::invalid_argument("unknown config key '" + key + "' for " + spec.name);
      values[key] = json_scalar_to_string(v, key);
    }
  }
  for (const auto& [key, v] : flags) values[key] = v;
  Json config = Json::object();
  for (const auto& option : spec.options) {
    auto it = values.find(option.key);
    if (it == values.end()) {
      if (option.required)
        throw std::invalid_argument(spec.name + ": --" + option.key + " is required");
      config[option.key] = option.fallback;
    } else {
      config[option.key] = it->second;
    }
  }
  return config;
}

std::string get(const Json& config, const std::string& key) {
  return config.at(key).get<std::string>();
}

// ---------------------------------------------------------------- output

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

Json envelope(const std::string& command, const Json& config) {
  Json doc = Json::object();
  doc["command"] = command;
  doc["config"] = config;
  if (config.contains("seed")) doc["seed"] = parse_seed(get(config, "seed"));
  return doc;
}

struct CommandOutput {
  Json result;
  std::optional<std::string> csv;
};

void emit(const std::string& command, const Json& config, const CommandOutput& output,
          const Runtime& rt, std::ostream& out, std::ostream& err) {
  Json doc = envelope(command, config);
  doc["result"] = output.result;
  const std::string summary = doc.dump(2) + "\n";
  if (output.csv) {
    if (rt.out_path.empty())
      out << *output.csv;
    else
      write_file(rt.out_path, *output.csv);
    if (rt.summary_path.empty())
      err << summary;
    else
      write_file(rt.summary_path, summary);
    return;
  }
  if (rt.out_path.empty())
    out << summary;
  else
    write_file(rt.out_path, summary);
  if (!rt.summary_path.empty()) write_file(rt.summary_path, summary);
}

Json rows_to_json(std::span<const ExperimentRow> rows) {
  Json arr = Json::array();
  for (const auto& r : rows)
    arr.push_back({{"N", r.N}, {"s", r.s}, {"K", r.K}, {"mean_R", r.mean_R},
                   {"var_R", r.var_R}, {"limit", r.limit}, {"expectation", r.expectation},
                   {"seconds", r.seconds}});
  return arr;
}

Json estimate_json(const MonteCarloEstimate& e) {
  return {{"mean", e.mean}, {"std_error", e.std_error}};
}

// ---------------------------------------------------------------- commands

std::vector<SequenceData> materialize(const std::vector<SequenceSpec>& family, std::size_t N) {
  std::vector<SequenceData> seqs;
  for (const auto& spec : family) seqs.push_back(generate(spec, N));
  return seqs;
}

WeightedSupport read_support_file(const std::string& path, std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open support file '" + path + "'");
  std::vector<std::uint64_t> coords;
  std::vector<Complex> weights;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (tokens.size() < dim || tokens.size() > dim + 2)
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": expected " +
                                  std::to_string(dim) + " coordinates and optional weight");
    for (std::size_t i = 0; i < dim; ++i) coords.push_back(parse_count(tokens[i], "support"));
    const double re = tokens.size() > dim ? parse_real(tokens[dim], "support") : 1.0;
    const double im = tokens.size() > dim + 1 ? parse_real(tokens[dim + 1], "support") : 0.0;
    weights.emplace_back(re, im);
  }
  return WeightedSupport(dim, std::move(coords), std::move(weights));
}

CommandOutput run_stat(const Json& config) {
  const auto family = parse_family(get(config, "family"));
  const auto N = static_cast<std::size_t>(parse_count(get(config, "N"), "N"));
  const double s = parse_real(get(config, "s"), "s");
  const NormKind norm = parse_norm(get(config, "norm"));
  const std::size_t d = family.size();
  if (d > kMaxTorusDim) throw std::invalid_argument("family has too many sequences");
  if (N < 2) throw std::invalid_argument("--N must be >= 2");
  if (!(pair_threshold(s, N, d) < 0.5))
    throw std::invalid_argument("threshold s/N^(1/d) must be < 1/2");

  TorusPoint alpha;
  if (const auto text = get(config, "alpha"); !text.empty()) {
    const auto values = parse_reals(text, "alpha");
    if (values.size() != d)
      throw std::invalid_argument("--alpha has " + std::to_string(values.size()) +
                                  " components, family has " + std::to_string(d));
    alpha = TorusPoint::from_reals(values);
  } else {
    alpha = sample_alpha(parse_seed(get(config, "seed")), d);
  }
  const auto seqs = materialize(family, N);
  const auto points = orbit(seqs, alpha);
  const std::string counter = get(config, "counter");
  if (counter != "grid" && counter != "naive")
    throw std::invalid_argument("--counter must be grid or naive");
  const auto r = counter == "naive" ? ppc_naive(points, s, norm) : ppc_grid(points, s, norm);

  Json alpha_json = Json::array();
  for (auto c : alpha.coords()) alpha_json.push_back(c.value());
  CommandOutput output;
  output.result = {{"alpha", alpha_json},       {"N", r.N},
                   {"s", r.s},                  {"norm", std::string(to_string(r.norm))},
                   {"near_pairs", r.near_pairs}, {"statistic", r.statistic},
                   {"limit", r.limit},          {"expectation", r.expectation}};
  return output;
}

CommandOutput run_energy(const Json& config) {
  const auto family = parse_family(get(config, "family"));
  const auto grid = parse_grid(get(config, "N"), "N");
  const auto comparison = parse_comparisons(get(config, "compare"));
  EnergyOptions options;
  options.pass_budget = static_cast<std::size_t>(parse_count(get(config, "budget"), "budget"));
  if (options.pass_budget == 0) throw std::invalid_argument("--budget must be >= 1");
  const auto rows = run_energy_scan(family, grid, comparison, options);

  std::ostringstream csv;
  write_csv(csv, rows, comparison);
  CommandOutput output;
  output.csv = csv.str();
  Json arr = Json::array();
  for (const auto& row : rows) {
    Json ratios = Json::object();
    for (const auto& [name, value] : row.report.ratios) ratios["E/" + name] = value;
    arr.push_back({{"N", row.report.N},
                   {"E", row.report.E},
                   {"trivial_bounds_hold", row.report.trivial_bounds_hold()},
                   {"ratios", ratios}});
  }
  output.result = {{"rows", arr}};
  return output;
}

CommandOutput run_gcdsum(const Json& config) {
  const double alpha = parse_real(get(config, "alpha"), "alpha");
  const std::string support_path = get(config, "support");
  const std::string family_text = get(config, "family");
  if (support_path.empty() == family_text.empty())
    throw std::invalid_argument("gcdsum needs exactly one of --support or --family");

  std::optional<WeightedSupport> f;
  if (!support_path.empty()) {
    const auto dim = static_cast<std::size_t>(parse_count(get(config, "dim"), "dim"));
    if (dim == 0) throw std::invalid_argument("--dim must be >= 1");
    f = read_support_file(support_path, dim);
  } else {
    if (get(config, "N").empty()) throw std::invalid_argument("--family needs --N");
    const auto N = static_cast<std::size_t>(parse_count(get(config, "N"), "N"));
    const auto seqs = materialize(parse_family(family_text), N);
    f = fold_representations(representation_counts(seqs));
  }
  const double value = gcd_sum(*f, alpha);
  CommandOutput output;
  output.result = {{"value", value},
                   {"dim", f->dim()},
                   {"K", f->size()},
                   {"norm1", f->norm1()},
                   {"norm2_squared", f->norm2_squared()},
                   {"value_over_norm2_squared", value / f->norm2_squared()}};
  return output;
}

CommandOutput run_bessel(const Json& config) {
  const double nu = parse_real(get(config, "nu"), "nu");
  const double t = parse_real(get(config, "t"), "t");
  const auto eval = bessel_j(nu, t);
  CommandOutput output;
  output.result = {{"nu", eval.nu},
                   {"t", eval.t},
                   {"value", eval.value},
                   {"method", std::string(to_string(eval.method))},
                   {"abs_error_bound", eval.abs_error_bound}};
  if (t >= 1.0) output.result["asymptotic"] = bessel_asymptotic(nu, t);
  if (const auto coeff = get(config, "coeff"); !coeff.empty()) {
    const auto r = parse_ints(get(config, "r"), "r");
    if (r.empty()) throw std::invalid_argument("--coeff needs --r");
    const double s = parse_real(get(config, "s"), "s");
    const auto N = static_cast<std::size_t>(parse_count(get(config, "N"), "N"));
    if (coeff == "ball")
      output.result["coefficient"] = fourier_coeff_ball(r, s, N);
    else if (coeff == "box")
      output.result["coefficient"] = fourier_coeff_box(r, s, N);
    else
      throw std::invalid_argument("--coeff must be ball or box");
  }
  return output;
}

CommandOutput run_experiment(const Json& config, const Runtime& rt) {
  const std::string kind = get(config, "kind");
  const std::uint64_t seed = parse_seed(get(config, "seed"));
  CommandOutput output;
  std::ostringstream csv;

  if (kind == "convergence" || kind == "variance") {
    ExperimentConfig cfg;
    cfg.family = parse_family(get(config, "family"));
    cfg.norm = parse_norm(get(config, "norm"));
    cfg.s_values = parse_reals(get(config, "s"), "s");
    cfg.N_values = parse_grid(get(config, "N"), "N");
    cfg.K = static_cast<std::size_t>(parse_count(get(config, "K"), "K"));
    cfg.seed = seed;
    cfg.workers = rt.workers;
    cfg.timing = parse_bool(get(config, "timing"), "timing");
    cfg.naive_spot_check = parse_bool(get(config, "spot_check"), "spot_check");
    if (kind == "convergence") {
      const auto rows = run_convergence(cfg);
      write_csv(csv, rows);
      output.result = {{"rows", rows_to_json(rows)}};
    } else {
      const auto decay = run_variance_decay(cfg);
      write_csv(csv, decay.rows);
      Json slopes = Json::array();
      for (const auto& [s, slope] : decay.slopes) slopes.push_back({{"s", s}, {"slope", slope}});
      output.result = {{"rows", rows_to_json(decay.rows)}, {"loglog_slopes", slopes}};
    }
  } else if (kind == "counterexample") {
    const auto alpha_text = get(config, "alpha");
    const double alpha =
        alpha_text.empty() ? (std::sqrt(5.0) - 1.0) / 2.0 : parse_real(alpha_text, "alpha");
    const auto s_values = parse_reals(get(config, "s"), "s");
    if (s_values.size() != 1) throw std::invalid_argument("counterexample takes a single --s");
    const auto grid = parse_grid(get(config, "N"), "N");
    const auto result = run_counterexample(alpha, s_values.front(), grid);
    write_csv(csv, result);
    Json rows = Json::array();
    for (const auto& r : result.rows)
      rows.push_back({{"N", r.N}, {"R", r.R}, {"limit", r.limit},
                      {"distinct_points", r.distinct_points}});
    output.result = {{"alpha", result.alpha},
                     {"s", result.s},
                     {"rows", rows},
                     {"dispersion", result.dispersion},
                     {"max_deviation", result.max_deviation},
                     {"degenerate", result.degenerate}};
  } else if (kind == "moments") {
    const auto alpha_text = get(config, "alpha");
    const double alpha = alpha_text.empty() ? 1.0 : parse_real(alpha_text, "alpha");
    const auto l_values = parse_reals(get(config, "l"), "l");
    const auto samples = static_cast<std::size_t>(parse_count(get(config, "samples"), "samples"));
    const auto M = parse_count(get(config, "M"), "M");
    const auto rows = moment_growth_probe(alpha, l_values, samples, M, seed, rt.workers);
    csv << "l,estimate,std_error\n";
    Json arr = Json::array();
    for (const auto& r : rows) {
      csv << format_real(r.l) << ',' << format_real(r.moment.mean) << ','
          << format_real(r.moment.std_error) << '\n';
      arr.push_back({{"l", r.l}, {"estimate", r.moment.mean}, {"std_error", r.moment.std_error}});
    }
    output.result = {{"alpha", alpha}, {"M", M}, {"samples", samples}, {"rows", arr}};
  } else {
    throw std::invalid_argument("--kind must be convergence, variance, counterexample or moments");
  }
  output.csv = csv.str();
  return output;
}

CommandOutput run_verify_eq0(const Json& config, const Runtime& rt) {
  const double alpha = parse_real(get(config, "alpha"), "alpha");
  const auto M = parse_count(get(config, "M"), "M");
  const auto samples = static_cast<std::size_t>(parse_count(get(config, "samples"), "samples"));
  const auto seed = parse_seed(get(config, "seed"));

  std::optional<WeightedSupport> f;
  if (const auto path = get(config, "support"); !path.empty()) {
    f = read_support_file(path, 2);
  } else {
    std::vector<std::uint64_t> coords;
    for (const auto& pair : split(get(config, "pairs"), ',')) {
      const auto parts = split(pair, ':');
      if (parts.size() != 2) throw std::invalid_argument("--pairs entries look like a:b");
      coords.push_back(parse_count(parts[0], "pairs"));
      coords.push_back(parse_count(parts[1], "pairs"));
    }
    f = WeightedSupport::indicator(2, std::move(coords));
  }
  const auto report = verify_eq0(*f, alpha, M, samples, seed, rt.workers);
  const double z = (report.zeta_product.mean - report.exact_truncated_rhs) /
                   report.zeta_product.std_error;
  const double zd = (report.dirichlet_moment.mean - report.f_norm2_squared) /
                    report.dirichlet_moment.std_error;
  CommandOutput output;
  output.result = {{"estimate", report.zeta_product.mean},
                   {"std_error", report.zeta_product.std_error},
                   {"exact_truncated_rhs", report.exact_truncated_rhs},
                   {"untruncated_rhs", report.untruncated_rhs},
                   {"samples", report.samples},
                   {"M", report.M},
                   {"alpha", report.alpha},
                   {"seed", report.seed},
                   {"z_score", z},
                   {"dirichlet_moment", estimate_json(report.dirichlet_moment)},
                   {"f_norm2_squared", report.f_norm2_squared},
                   {"dirichlet_z_score", zd}};
  return output;
}

void run(const std::string& command, const Json& config, const Runtime& rt, std::ostream& out,
         std::ostream& err) {
  CommandOutput output;
  if (command == "stat")
    output = run_stat(config);
  else if (command == "energy")
    output = run_energy(config);
  else if (command == "gcdsum")
    output = run_gcdsum(config);
  else if (command == "bessel")
    output = run_bessel(config);
  else if (command == "experiment")
    output = run_experiment(config, rt);
  else if (command == "verify-eq0")
    output = run_verify_eq0(config, rt);
  else
    throw std::invalid_argument("unknown command '" + command + "'");
  emit(command, config, output, rt, out, err);
}

void replay(const std::string& path, const Runtime& rt, std::ostream& out, std::ostream& err) {
  const Json doc = read_json_file(path);
  if (!doc.is_object() || !doc.contains("command") || !doc.contains("config") ||
      !doc["command"].is_string())
    throw std::invalid_argument("'" + path + "' is not a summary (needs command and config)");
  const std::string command = doc["command"].get<std::string>();
  const Json config = resolve(find_command(command), doc["config"], {});
  run(command, config, rt, out, err);
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
  CLI::App app{"Pair correlation, additive energy, GCD sum and Bessel experiments", "mppc"};
  app.require_subcommand(0, 1);

  Runtime top;
  std::string replay_path;
  app.add_option("--replay", replay_path, "re-run the command recorded in a JSON summary");
  app.add_option("--out", top.out_path, "primary output file (default stdout)");
  app.add_option("--summary", top.summary_path, "JSON summary file");
  app.add_option("--workers", top.workers, "worker threads; output does not depend on it");

  struct Parsed {
    CLI::App* app = nullptr;
    std::map<std::string, std::string> storage;
    std::map<std::string, CLI::Option*> options;
    std::string config_path;
    Runtime rt;
  };
  std::vector<Parsed> parsed(command_specs().size());
  for (std::size_t i = 0; i < command_specs().size(); ++i) {
    const auto& spec = command_specs()[i];
    auto& p = parsed[i];
    p.app = app.add_subcommand(spec.name, spec.help);
    for (const auto& option : spec.options) {
      std::string help = option.help;
      if (!option.fallback.empty()) help += " [default: " + option.fallback + "]";
      if (option.required) help += " (required)";
      p.options[option.key] = p.app->add_option("--" + option.key, p.storage[option.key], help);
    }
    p.app->add_option("--config", p.config_path, "flat JSON file of option values");
    p.app->add_option("--out", p.rt.out_path, "primary output file (default stdout)");
    p.app->add_option("--summary", p.rt.summary_path, "JSON summary file");
    p.app->add_option("--workers", p.rt.workers, "worker threads; output does not depend on it");
  }

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
    err << "mppc: " << e.what() << '\n';
    return kUsage;
  }

  try {
    const auto subs = app.get_subcommands();
    if (!replay_path.empty()) {
      if (!subs.empty()) {
        err << "mppc: --replay cannot be combined with a subcommand\n";
        return kUsage;
      }
      replay(replay_path, top, out, err);
      return kOk;
    }
    if (subs.empty()) {
      out << app.help();
      return kOk;
    }
    for (std::size_t i = 0; i < parsed.size(); ++i) {
      auto& p = parsed[i];
      if (p.app != subs.front()) continue;
      if (p.app->get_help_ptr() && p.app->get_help_ptr()->count() > 0) {
        out << p.app->help();
        return kOk;
      }
      std::map<std::string, std::string> flags;
      for (const auto& [key, opt] : p.options)
        if (opt->count() > 0) flags[key] = p.storage[key];
      const Json file_values = p.config_path.empty() ? Json() : read_json_file(p.config_path);
      const auto& spec = command_specs()[i];
      const Json config = resolve(spec, file_values, flags);
      run(spec.name, config, p.rt, out, err);
      return kOk;
    }
    return kFailure;
  } catch (const IoError& e) {
    err << "mppc: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::invalid_argument& e) {
    err << "mppc: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::domain_error& e) {
    err << "mppc: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::overflow_error& e) {
    err << "mppc: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::out_of_range& e) {
    err << "mppc: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "mppc: malformed JSON: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::exception& e) {
    err << "mppc: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace mppc::cli
