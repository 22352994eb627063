#include "specising/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>

#include "specising/gadget.hpp"
#include "specising/meanfield.hpp"
#include "specising/spectral.hpp"

namespace specising {

namespace {

void dump_number(std::string& out, const nlohmann::json& v) {
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v.get<double>());
    out += buf;
  } else {
    out += v.dump();
  }
}

void dump_value(std::string& out, const nlohmann::json& v, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
  if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad + nlohmann::json(it.key()).dump() + ": ";
      dump_value(out, it.value(), indent, depth + 1);
    }
    out += "\n" + close_pad + "}";
  } else if (v.is_array()) {
    if (v.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    bool first = true;
    for (const auto& item : v) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      dump_value(out, item, indent, depth + 1);
    }
    out += "\n" + close_pad + "]";
  } else if (v.is_number()) {
    dump_number(out, v);
  } else {
    out += v.dump();
  }
}

}  // namespace

std::string dump_json_17(const nlohmann::json& doc, int indent) {
  std::string out;
  dump_value(out, doc, indent, 0);
  out += "\n";
  return out;
}

namespace {

void write_stage_file(const PipelineConfig& config, int index, const std::string& name,
                      const nlohmann::json& doc) {
  if (config.out_dir.empty()) return;
  std::filesystem::create_directories(config.out_dir);
  char prefix[8];
  std::snprintf(prefix, sizeof(prefix), "%02d_", index);
  const auto path = std::filesystem::path(config.out_dir) / (prefix + name + ".json");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << dump_json_17(doc);
}

nlohmann::json params_json(const ReductionParams& p) {
  return {
      {"variant", p.variant == ReductionVariant::dense ? "dense" : "sparse"},
      {"gamma", p.gamma},
      {"beta", p.beta},
      {"w_minus", p.w_minus},
      {"eta", p.eta},
      {"t", p.t},
      {"n", p.n},
      {"d", p.d},
      {"seed", p.seed},
      {"psi_c", p.psi_c},
      {"exponent", p.exponent == MatchExponent::per_matching_edge ? "mt/2" : "3mt/2"},
      {"admissible", p.admissible},
  };
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
  PipelineResult result;
  const auto& p = config.params;
  nlohmann::json summary;
  summary["schema_version"] = 1;
  summary["params"] = params_json(p);

  int stage_index = 0;
  std::string current_stage;
  auto emit = [&](const std::string& name, nlohmann::json doc) {
    doc["schema_version"] = 1;
    write_stage_file(config, ++stage_index, name, doc);
    result.stages.emplace_back(name, std::move(doc));
  };

  try {
    current_stage = "meanfield";
    double q_plus = 0.0;
    {
      nlohmann::json doc;
      doc["beta"] = p.beta;
      if (p.variant == ReductionVariant::dense) {
        const auto mf = solve_clique_fixed_points(p.beta);
        doc["roots"] = mf.roots;
        doc["q_plus"] = *mf.q_plus;
        doc["q_minus"] = *mf.q_minus;
        doc["near_critical"] = mf.near_critical;
        q_plus = *mf.q_plus;
      } else {
        const auto fp = solve_tree_fixed_points(p.d - 1, p.beta);
        doc["gadget_degree"] = p.d - 1;
        doc["tilde_q_plus"] = fp.tilde_q_plus;
        doc["tilde_q_minus"] = fp.tilde_q_minus;
        doc["q_plus"] = fp.q_plus;
        doc["q_minus"] = fp.q_minus;
        q_plus = fp.q_plus;
      }
      summary["q_plus"] = q_plus;
      summary["q_minus"] = 1.0 - q_plus;
      emit("meanfield", std::move(doc));
    }

    current_stage = "build";
    const auto H = MaxCutInstance::from_graph(config.graph);
    const auto inst = build_reduction(H, p);
    {
      nlohmann::json doc;
      doc["dimension"] = inst.total_dimension();
      doc["matching_edges"] = inst.matching.size();
      doc["m"] = H.m;
      doc["params"] = params_json(p);
      if (!config.out_dir.empty()) {
        const auto dir = std::filesystem::path(config.out_dir);
        std::filesystem::create_directories(dir);
        write_interaction((dir / "instance.sym").string(), inst.coupling);
        write_instance_meta((dir / "instance.json").string(), inst);
        doc["instance_sym"] = (dir / "instance.sym").string();
        doc["instance_meta"] = (dir / "instance.json").string();
      }
      emit("build", std::move(doc));
    }

    current_stage = "gadget";
    double epsilon = 0.0;
    {
      StructuredZOptions zopts;
      zopts.threads = config.threads;
      epsilon = reduction_gadget_epsilon(inst, zopts);
      nlohmann::json doc;
      doc["epsilon"] = epsilon;
      doc["n"] = p.n;
      doc["t"] = p.t;
      doc["r_odd"] = ((p.n - p.t) % 2 == 1);
      if (p.variant == ReductionVariant::sparse) {
        RegularGadget gadget(*inst.gadget_graph, p.t, p.beta);
        RegularVerifyOptions vopts;
        vopts.threads = config.threads;
        const auto rep = verify_regular_gadget(gadget, vopts);
        doc["gap"] = rep.gap;
        doc["friedman_bound"] = rep.friedman_bound;
        doc["gap_ok"] = rep.gap_ok;
        doc["max_deviation"] = rep.max_deviation;
        doc["tree_q_plus"] = rep.tree_q_plus;
      }
      summary["epsilon"] = epsilon;
      emit("gadget", std::move(doc));
    }

    current_stage = "spectrum";
    {
      SpectralOptions sopts;
      sopts.tol = config.tol;
      const auto cert = weyl_certificate(inst, sopts);
      nlohmann::json doc;
      doc["e_norm"] = cert.e_norm;
      doc["d_gap"] = cert.d_gap;
      doc["certified_bound"] = cert.certified_bound;
      doc["measured_gap"] = cert.measured_gap;
      doc["bound_holds"] = cert.bound_holds;
      doc["gap_below_gamma"] = cert.measured_gap < p.gamma;
      doc["dense_admissible"] = cert.dense_admissible;
      if (p.variant == ReductionVariant::sparse) {
        doc["max_row_support"] = inst.coupling.max_row_support(true);
        doc["row_support_ok"] = inst.coupling.max_row_support(true) <= p.d;
      }
      summary["measured_gap"] = cert.measured_gap;
      summary["certified_bound"] = cert.certified_bound;
      summary["gap_below_gamma"] = cert.measured_gap < p.gamma;
      emit("spectrum", std::move(doc));
    }

    current_stage = "exactz";
    double log_z_full = 0.0, log_z_hat = 0.0;
    {
      StructuredZOptions zopts;
      zopts.threads = config.threads;
      zopts.outer_cap_bits = config.outer_cap_bits;
      log_z_full = structured_log_z(inst, true, zopts);
      log_z_hat = structured_log_z(inst, false, zopts);
      nlohmann::json doc;
      doc["log_z_full"] = log_z_full;
      doc["log_z_hat"] = log_z_hat;
      doc["log_ratio"] = log_z_full - log_z_hat;
      summary["log_z_full"] = log_z_full;
      summary["log_z_hat"] = log_z_hat;
      summary["log_ratio"] = log_z_full - log_z_hat;
      emit("exactz", std::move(doc));
    }

    current_stage = "lemma4";
    {
      StructuredZOptions zopts;
      zopts.threads = config.threads;
      zopts.outer_cap_bits = config.outer_cap_bits;
      const auto rep = lemma4_check(inst, zopts, epsilon);
      nlohmann::json doc;
      doc["epsilon"] = rep.epsilon;
      doc["maxcut"] = rep.maxcut;
      doc["a"] = rep.a;
      doc["b"] = rep.b;
      doc["e_match"] = rep.e_match;
      doc["log_center"] = rep.log_center;
      doc["ratio_over_center"] = rep.ratio_over_center;
      doc["window_lower"] = rep.window_lower;
      doc["window_upper"] = rep.window_upper;
      doc["lower_vacuous"] = rep.lower_vacuous;
      doc["pass"] = rep.pass;
      summary["window"] = {{"ratio_over_center", rep.ratio_over_center},
                           {"lower", rep.window_lower},
                           {"upper", rep.window_upper},
                           {"pass", rep.pass}};
      emit("lemma4", std::move(doc));
    }

    current_stage = "maxcut";
    {
      const auto brute = brute_force_maxcut(H);
      const double log_ratio = log_z_full - log_z_hat;
      const auto bounds = maxcut_bounds(log_ratio, p, epsilon, H.m, config.delta, q_plus);
      const bool contains = bounds.lower <= brute.maxcut && brute.maxcut <= bounds.upper;
      nlohmann::json doc;
      doc["brute_maxcut"] = brute.maxcut;
      doc["random_cut_floor"] = brute.random_cut_floor;
      doc["lower"] = bounds.lower;
      doc["upper"] = bounds.upper;
      doc["width"] = bounds.upper - bounds.lower;
      doc["delta"] = config.delta;
      doc["contains_maxcut"] = contains;
      summary["maxcut"] = {{"brute", brute.maxcut},
                           {"lower", bounds.lower},
                           {"upper", bounds.upper},
                           {"contains", contains}};
      emit("maxcut", std::move(doc));
    }
  } catch (const std::exception& e) {
    result.ok = false;
    result.failed_stage = current_stage;
    result.error = e.what();
    summary["failed_stage"] = current_stage;
    summary["error"] = e.what();
    result.summary = summary;
    if (!config.out_dir.empty()) {
      std::ofstream out(std::filesystem::path(config.out_dir) / "summary.json");
      if (out) out << dump_json_17(summary);
    }
    return result;
  }

  result.ok = true;
  result.summary = summary;
  if (!config.out_dir.empty()) {
    std::ofstream out(std::filesystem::path(config.out_dir) / "summary.json");
    if (!out) throw std::runtime_error("cannot write summary.json");
    out << dump_json_17(summary);
  }
  return result;
}

}  // namespace specising
