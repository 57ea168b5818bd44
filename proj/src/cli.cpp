#include "snum/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "snum/config.hpp"
#include "snum/error.hpp"
#include "snum/io.hpp"
#include "snum/oracle.hpp"
#include "snum/snumbers.hpp"
#include "snum/verify.hpp"

namespace snum::cli {

namespace {

struct Options {
  std::optional<std::string> config_path;
  std::string alpha;
  std::string theorem;
  std::size_t blocks = 3;
  std::optional<double> t;
  std::optional<double> r;
  double c = 1.0;
  double c1 = 1.0;
  std::size_t horizon = 64;
  std::optional<std::string> out;
  std::optional<std::string> json;
  std::optional<std::string> csv;
  std::optional<std::string> plot;
  std::optional<std::string> matrix;
  std::optional<std::string> op_path;
  std::string scale = "a";
  std::size_t m_max = 0;
  std::string oracle_kind;
  std::size_t m = 1;
  std::size_t restarts = 50;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::size_t family_size = 8;
  std::size_t rounds = 16;
  std::optional<std::size_t> verify_m_max;
  double epsilon = 0.01;
  std::size_t k_max = 500;
  std::size_t trials = 50;
  std::size_t dim = 6;
  double gap_min = 0.1;
  double p = 2.0;
  std::string form = "automatic";
};

std::string resolve(const Config& cfg, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute() || cfg.output_dir.empty() || cfg.output_dir == ".") return path;
  return (std::filesystem::path(cfg.output_dir) / p).string();
}

Json provenance(const std::string& command, const Config& cfg, const Options& o) {
  Json kappa = Json::object();
  for (const auto& [p, v] : cfg.kappa) kappa[format_double(p)] = v;
  return Json{{"tool", "snum"},
              {"version", kToolVersion},
              {"command", command},
              {"sequence", o.alpha},
              {"seed", o.seed.value_or(cfg.seed)},
              {"config",
               Json{{"kg_constant", cfg.kg_constant},
                    {"kappa", std::move(kappa)},
                    {"tolerance", o.tol.value_or(cfg.tolerance)},
                    {"cap_width_oracle", cfg.cap_width_oracle},
                    {"cap_auerbach", cfg.cap_auerbach},
                    {"output_dir", cfg.output_dir}}}};
}

void emit(std::ostream& out, const Config& cfg, const std::optional<std::string>& path, const Json& doc) {
  if (path) {
    write_json(resolve(cfg, *path), doc);
  } else {
    out << doc.dump(2) << '\n';
  }
}

ConstructionConstants construction_constants(const Options& o) { return {o.c, o.c1}; }

BlockOperator build_from(const Options& o) {
  const auto seq = DecaySequence::parse(o.alpha);
  return build(parse_variant(o.theorem), seq, o.blocks, o.t, o.r, construction_constants(o));
}

TaggedMatrix operator_matrix(const Json& doc) {
  if (!doc.contains("blocks") || !doc["blocks"].is_array() || doc["blocks"].empty()) {
    throw ParseError("field 'blocks' must be a non-empty array");
  }
  std::vector<double> diag;
  std::optional<Norm> p_dom, p_cod;
  for (const auto& b : doc["blocks"]) {
    if (!b.contains("diagonal") || !b["diagonal"].is_array()) throw ParseError("field 'blocks[].diagonal' missing");
    if (!b.contains("p_dom") || !b.contains("p_cod")) throw ParseError("field 'blocks[].p_dom' missing");
    p_dom = norm_from_json(b["p_dom"], "p_dom");
    p_cod = norm_from_json(b["p_cod"], "p_cod");
    for (const auto& v : b["diagonal"]) {
      if (!v.is_number()) throw ParseError("field 'blocks[].diagonal' holds a non-number");
      diag.push_back(v.get<double>());
    }
  }
  const auto n = static_cast<Eigen::Index>(diag.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
  return TaggedMatrix(std::move(m), *p_dom, *p_cod);
}

int cmd_minorant(const Options& o, const Config& cfg, std::ostream& out) {
  const auto seq = DecaySequence::parse(o.alpha);
  const auto minorant = convex_minorant(seq, o.horizon);
  const auto csv = minorant_csv(seq, minorant);
  if (o.out) {
    write_text(resolve(cfg, *o.out), csv);
  } else {
    out << csv;
  }
  return kExitOk;
}

int cmd_plan(const Options& o, const Config& cfg, std::ostream& out) {
  const auto op = build_from(o);
  Json doc = to_json(op.plan);
  doc["sequence"] = op.sequence_spec;
  doc["minorant_horizon"] = op.minorant_horizon;
  doc["chord_horizon"] = op.chord_horizon;
  doc["total_dim"] = op.plan.total_dim();
  doc["provenance"] = provenance("plan", cfg, o);
  emit(out, cfg, o.json, doc);
  return kExitOk;
}

int cmd_build(const Options& o, const Config& cfg, std::ostream& out) {
  const auto op = build_from(o);
  Json doc = to_json(op);
  doc["provenance"] = provenance("build", cfg, o);
  emit(out, cfg, o.out, doc);
  return kExitOk;
}

int cmd_snumbers(const Options& o, const Config& cfg, std::ostream& out) {
  if (o.matrix.has_value() == o.op_path.has_value()) {
    throw InvalidInput("pass exactly one of --matrix and --operator");
  }
  const TaggedMatrix m =
      o.matrix ? load_matrix(*o.matrix) : operator_matrix(Json::parse(read_text(*o.op_path)));
  const auto report = exact_snumbers(m, parse_scale(o.scale), o.m_max);
  if (o.csv) write_text(resolve(cfg, *o.csv), snumber_csv(report));
  Json doc = to_json(report);
  doc["provenance"] = provenance("snumbers", cfg, o);
  if (o.json || !o.csv) emit(out, cfg, o.json, doc);
  return kExitOk;
}

int cmd_oracle(const Options& o, const Config& cfg, std::ostream& out) {
  if (!o.matrix) throw InvalidInput("--matrix is required");
  const auto m = load_matrix(*o.matrix);
  OracleOptions opt;
  opt.restarts = o.restarts;
  opt.seed = o.seed.value_or(cfg.seed);
  opt.tol = o.tol.value_or(cfg.tolerance);
  opt.dimension_cap = cfg.cap_width_oracle;
  Json doc;
  if (o.oracle_kind == "pi2") {
    if (std::max(m.rows(), m.cols()) > cfg.cap_width_oracle) throw ResourceLimit("matrix exceeds the oracle cap");
    doc = to_json(pi2_lower_oracle(m, o.family_size, o.rounds, opt.seed));
  } else if (o.oracle_kind == "gelfand") {
    doc = to_json(gelfand_oracle(m, o.m, opt));
  } else if (o.oracle_kind == "kolmogorov") {
    doc = to_json(kolmogorov_oracle(m, o.m, opt));
  } else {
    doc = to_json(approx_oracle(m, o.m, opt));
  }
  doc["oracle"] = o.oracle_kind;
  doc["m"] = o.m;
  doc["provenance"] = provenance("oracle " + o.oracle_kind, cfg, o);
  emit(out, cfg, o.json, doc);
  return kExitOk;
}

ClaimForm parse_form(const std::string& s) {
  if (s == "automatic") return ClaimForm::automatic;
  if (s == "convex") return ClaimForm::convex;
  if (s == "general") return ClaimForm::general;
  throw InvalidInput("unknown claim form '" + s + "'");
}

template <class Report>
void write_side_files(const Report& report, const Config& cfg, const Options& o) {
  if (o.csv) write_text(resolve(cfg, *o.csv), report_csv(report));
}

int cmd_verify(const Options& o, const Config& cfg, std::ostream& out) {
  const auto prov = provenance("verify " + o.theorem, cfg, o);
  const std::uint64_t seed = o.seed.value_or(cfg.seed);
  if (o.theorem == "prop-second") {
    OracleOptions opt;
    opt.restarts = o.restarts;
    opt.tol = o.tol.value_or(cfg.tolerance);
    opt.dimension_cap = cfg.cap_width_oracle;
    opt.iterations = 1500;
    const auto report = verify_prop_second(o.dim, o.trials, o.gap_min, seed, opt);
    Json doc = to_json(report);
    doc["provenance"] = prov;
    if (o.json) write_json(resolve(cfg, *o.json), doc);
    write_side_files(report, cfg, o);
    out << "prop-second: " << (report.pass ? "PASS" : "FAIL") << " (min gap " << format_double(report.min_gap)
        << ")\n";
    return report.pass ? kExitOk : kExitFailed;
  }
  if (o.alpha.empty()) throw InvalidInput("--alpha is required");
  const auto seq = DecaySequence::parse(o.alpha);
  if (o.theorem == "prop-optimal") {
    const auto report = verify_prop_optimal(seq, o.blocks, o.k_max, o.epsilon, cfg.constants());
    Json doc = to_json(report);
    doc["provenance"] = prov;
    if (o.json) write_json(resolve(cfg, *o.json), doc);
    write_side_files(report, cfg, o);
    out << "prop-optimal: " << (report.pass ? "PASS" : "FAIL");
    if (report.k0) out << " (k0 = " << *report.k0 << ")";
    if (!report.diagnostic.empty()) out << " " << report.diagnostic;
    out << '\n';
    return report.pass ? kExitOk : kExitFailed;
  }
  VerifyOptions vo;
  vo.m_max = o.verify_m_max;
  vo.form = parse_form(o.form);
  vo.constants = cfg.constants();
  vo.p = o.p;
  TheoremCheckReport report;
  switch (parse_variant(o.theorem)) {
    case Variant::controlled: report = verify_controlled(seq, o.blocks, vo); break;
    case Variant::twosum: report = verify_twosum(seq, o.blocks, vo); break;
    case Variant::nocotype: report = verify_nocotype(seq, o.blocks, vo); break;
    case Variant::type:
      if (!o.t || !o.r) throw InvalidInput("--t and --r are required for the type construction");
      report = verify_type(seq, o.blocks, *o.t, *o.r, construction_constants(o), vo);
      break;
  }
  ReportPaths paths;
  if (o.json) paths.json = resolve(cfg, *o.json);
  if (o.csv) paths.csv = resolve(cfg, *o.csv);
  if (o.plot) paths.plot = resolve(cfg, *o.plot);
  emit_report(report, prov, paths);
  std::size_t failed = 0;
  for (const auto& row : report.rows) failed += row.pass ? 0 : 1;
  out << report.theorem << ": " << (report.overall_pass ? "PASS" : "FAIL") << " (" << report.rows.size()
      << " rows, " << failed << " failing)\n";
  return report.overall_pass ? kExitOk : kExitFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"s-number constructions, oracles and verifiers"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config_path, "JSON config file");

  auto theorem_names = CLI::IsMember({"controlled", "twosum", "nocotype", "type"});

  auto* minorant = app.add_subcommand("minorant", "convex minorant of a decay sequence");
  minorant->add_option("--alpha", o.alpha, "geometric:<r> | power:<s> | file:<path>")->required();
  minorant->add_option("--horizon", o.horizon)->required()->check(CLI::PositiveNumber);
  minorant->add_option("--out", o.out, "CSV output (stdout if omitted)");

  auto* plan = app.add_subcommand("plan", "block index plan");
  plan->add_option("--theorem", o.theorem)->required()->check(theorem_names);
  plan->add_option("--alpha", o.alpha)->required();
  plan->add_option("--blocks", o.blocks)->check(CLI::PositiveNumber);
  plan->add_option("--t", o.t);
  plan->add_option("--r", o.r);
  plan->add_option("--json", o.json);

  auto* buildc = app.add_subcommand("build", "build a block operator");
  buildc->add_option("--theorem", o.theorem)->required()->check(theorem_names);
  buildc->add_option("--alpha", o.alpha)->required();
  buildc->add_option("--blocks", o.blocks)->check(CLI::PositiveNumber);
  buildc->add_option("--t", o.t);
  buildc->add_option("--r", o.r);
  buildc->add_option("--C", o.c);
  buildc->add_option("--C1", o.c1);
  buildc->add_option("--out", o.out);

  auto* snumbers = app.add_subcommand("snumbers", "closed-form s-numbers of a matrix or operator");
  snumbers->add_option("--matrix", o.matrix);
  snumbers->add_option("--operator", o.op_path);
  snumbers->add_option("--scale", o.scale)->check(CLI::IsMember({"a", "c", "d", "t", "x", "y", "h"}));
  snumbers->add_option("--m-max", o.m_max);
  snumbers->add_option("--csv", o.csv);
  snumbers->add_option("--json", o.json);

  auto* oracle = app.add_subcommand("oracle", "optimisation oracles for small matrices");
  oracle->add_option("kind", o.oracle_kind)->required()->check(CLI::IsMember({"gelfand", "kolmogorov", "approx", "pi2"}));
  oracle->add_option("--matrix", o.matrix)->required();
  oracle->add_option("--m", o.m)->check(CLI::PositiveNumber);
  oracle->add_option("--restarts", o.restarts);
  oracle->add_option("--seed", o.seed);
  oracle->add_option("--tol", o.tol)->check(CLI::PositiveNumber);
  oracle->add_option("--family-size", o.family_size)->check(CLI::PositiveNumber);
  oracle->add_option("--rounds", o.rounds);
  oracle->add_option("--json", o.json);

  auto* verify = app.add_subcommand("verify", "check the claimed inequalities");
  verify->add_option("--theorem", o.theorem)
      ->required()
      ->check(CLI::IsMember({"controlled", "twosum", "nocotype", "type", "prop-optimal", "prop-second"}));
  verify->add_option("--alpha", o.alpha);
  verify->add_option("--blocks", o.blocks)->check(CLI::PositiveNumber);
  verify->add_option("--t", o.t);
  verify->add_option("--r", o.r);
  verify->add_option("--C", o.c);
  verify->add_option("--C1", o.c1);
  verify->add_option("--m-max", o.verify_m_max);
  verify->add_option("--p", o.p);
  verify->add_option("--form", o.form)->check(CLI::IsMember({"automatic", "convex", "general"}));
  verify->add_option("--epsilon", o.epsilon);
  verify->add_option("--k-max", o.k_max);
  verify->add_option("--trials", o.trials);
  verify->add_option("--n", o.dim);
  verify->add_option("--gap-min", o.gap_min);
  verify->add_option("--restarts", o.restarts);
  verify->add_option("--seed", o.seed);
  verify->add_option("--tol", o.tol)->check(CLI::PositiveNumber);
  verify->add_option("--report", o.json, "JSON report path");
  verify->add_option("--csv", o.csv);
  verify->add_option("--plot", o.plot);

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    const Config cfg = load_config(o.config_path);
    if (minorant->parsed()) return cmd_minorant(o, cfg, out);
    if (plan->parsed()) return cmd_plan(o, cfg, out);
    if (buildc->parsed()) return cmd_build(o, cfg, out);
    if (snumbers->parsed()) return cmd_snumbers(o, cfg, out);
    if (oracle->parsed()) return cmd_oracle(o, cfg, out);
    if (verify->parsed()) return cmd_verify(o, cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Json::exception& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace snum::cli
