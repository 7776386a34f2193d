#include "extcond/report.hpp"

#include <chrono>
#include <cstdio>

#include "extcond/condenser.hpp"
#include "extcond/game.hpp"
#include "json.hpp"

namespace extcond {

namespace {

std::string fmt_double(double v, const char* spec) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out.push_back('\\');
      out.push_back(c);
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

class StageTimer {
 public:
  explicit StageTimer(Report& rep) : rep_(rep), last_(now_seconds()), start_(last_) {}
  void stage(const std::string& name) {
    const double t = now_seconds();
    rep_.put("timing_" + name + "_s", t - last_);
    last_ = t;
  }
  void total() { rep_.put("timing_total_s", now_seconds() - start_); }

 private:
  Report& rep_;
  double last_, start_;
};

void put_family_header(Report& rep, const FunctionFamily& fam, const ReportOptions& opts) {
  rep.put_int("schema_version", 1);
  rep.put_int("n", fam.n);
  rep.put_int("m", fam.m);
  rep.put_int("d", fam.d);
  if (fam.is_strong()) rep.put_int("strong_m_prime", *fam.strong_m_prime);
  rep.put_int("seed", static_cast<long long>(opts.seed));
  rep.put("tol", opts.tol);
  rep.put_string("timestamp", std::to_string(std::chrono::duration_cast<std::chrono::seconds>(
                                                 std::chrono::system_clock::now().time_since_epoch())
                                                 .count()));
}

}  // namespace

void Report::put(const std::string& key, double v) { entries_.push_back({key, v}); }
void Report::put_int(const std::string& key, long long v) { entries_.push_back({key, v}); }
void Report::put_bool(const std::string& key, bool v) { entries_.push_back({key, v}); }
void Report::put_string(const std::string& key, const std::string& v) {
  entries_.push_back({key, v});
}
void Report::put_array(const std::string& key, const std::vector<double>& v) {
  entries_.push_back({key, v});
}
void Report::put_report(const std::string& key, Report sub) {
  entries_.push_back({key, std::move(sub.entries_)});
}

void Report::write_json(const std::vector<Entry>& entries, std::string& out) {
  out.push_back('{');
  bool first = true;
  for (const auto& e : entries) {
    if (!first) out.push_back(',');
    first = false;
    out += "\"" + json_escape(e.key) + "\":";
    if (std::holds_alternative<double>(e.value)) {
      out += fmt_double(std::get<double>(e.value), "%.17g");
    } else if (std::holds_alternative<long long>(e.value)) {
      out += std::to_string(std::get<long long>(e.value));
    } else if (std::holds_alternative<bool>(e.value)) {
      out += std::get<bool>(e.value) ? "true" : "false";
    } else if (std::holds_alternative<std::string>(e.value)) {
      out += "\"" + json_escape(std::get<std::string>(e.value)) + "\"";
    } else if (std::holds_alternative<std::vector<double>>(e.value)) {
      out.push_back('[');
      const auto& arr = std::get<std::vector<double>>(e.value);
      for (size_t i = 0; i < arr.size(); ++i) {
        if (i) out.push_back(',');
        out += fmt_double(arr[i], "%.17g");
      }
      out.push_back(']');
    } else {
      write_json(std::get<std::vector<Entry>>(e.value), out);
    }
  }
  out.push_back('}');
}

std::string Report::to_json() const {
  std::string out;
  write_json(entries_, out);
  out.push_back('\n');
  return out;
}

void Report::write_text(const std::vector<Entry>& entries, const std::string& prefix,
                        std::string& out) {
  for (const auto& e : entries) {
    if (std::holds_alternative<std::vector<Entry>>(e.value)) {
      write_text(std::get<std::vector<Entry>>(e.value), prefix + e.key + ".", out);
      continue;
    }
    out += prefix + e.key + " = ";
    if (std::holds_alternative<double>(e.value)) {
      out += fmt_double(std::get<double>(e.value), "%.6g");
    } else if (std::holds_alternative<long long>(e.value)) {
      out += std::to_string(std::get<long long>(e.value));
    } else if (std::holds_alternative<bool>(e.value)) {
      out += std::get<bool>(e.value) ? "true" : "false";
    } else if (std::holds_alternative<std::string>(e.value)) {
      out += std::get<std::string>(e.value);
    } else {
      const auto& arr = std::get<std::vector<double>>(e.value);
      out.push_back('[');
      for (size_t i = 0; i < arr.size(); ++i) {
        if (i) out += ", ";
        out += fmt_double(arr[i], "%.6g");
      }
      out.push_back(']');
    }
    out.push_back('\n');
  }
}

std::string Report::to_text() const {
  std::string out;
  write_text(entries_, "", out);
  return out;
}

bool Report::equivalent(const std::string& json_a, const std::string& json_b) {
  auto strip = [](const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::function<void(nlohmann::json&)> walk = [&](nlohmann::json& node) {
      if (!node.is_object()) return;
      std::vector<std::string> drop;
      for (auto& [key, value] : node.items()) {
        if (key == "timestamp" || key.rfind("timing", 0) == 0)
          drop.push_back(key);
        else
          walk(value);
      }
      for (const auto& key : drop) node.erase(key);
    };
    walk(j);
    return j;
  };
  return strip(json_a) == strip(json_b);
}

Report build_extractor_report(const FunctionFamily& fam, double k, const ReportOptions& opts) {
  Report rep;
  put_family_header(rep, fam, opts);
  rep.put_string("kind", "extractor");
  rep.put("k", k);
  StageTimer timer(rep);

  const double eps = extractor::ext_error(fam, k, opts.enumeration_limit);
  rep.put("eps_classical", eps);
  if (k >= 1.0) rep.put("eps_classical_km1", extractor::ext_error(fam, k - 1.0, opts.enumeration_limit));
  timer.stage("classical");

  rep.put("bounded_norm", extractor::ext_bounded_norm(fam, k, opts.enumeration_limit));
  timer.stage("bounded_norm");

  auto seesaw = opts.seesaw;
  seesaw.seed = opts.seed;
  seesaw.enumeration_limit = opts.enumeration_limit;
  const auto profile = extractor::cb_lower_profile(fam, k, opts.q_dims, seesaw);
  std::vector<double> qs, lows;
  for (const auto& [q, res] : profile) {
    qs.push_back(q);
    lows.push_back(res.value);
  }
  rep.put_array("cb_lower_q", qs);
  rep.put_array("cb_lower", lows);
  timer.stage("cb_lower");

  if (eps > 0.0 && eps <= 1.0) {
    const auto bounds = extractor::cb_upper_bounds(fam, k, eps);
    rep.put("upper_dim_k_shift", bounds.dim.k_shift);
    rep.put("upper_dim_eps", bounds.dim.eps_bound);
    rep.put("upper_high_entropy_k_shift", bounds.high_entropy.k_shift);
    rep.put("upper_high_entropy_eps", bounds.high_entropy.eps_bound);
    if (bounds.small_output) {
      rep.put("upper_small_output_k_shift", bounds.small_output->k_shift);
      rep.put("upper_small_output_eps", bounds.small_output->eps_bound);
    }
    // report-only converse sanity: m <= k - 2 log2(1/eps) + O(1)
    rep.put("converse_margin", k - 2.0 * std::log2(1.0 / eps) - fam.m);
  }
  timer.total();
  return rep;
}

Report build_condenser_report(const FunctionFamily& fam, double k, double k_prime,
                              const ReportOptions& opts) {
  Report rep;
  put_family_header(rep, fam, opts);
  rep.put_string("kind", "condenser");
  rep.put("k", k);
  rep.put("k_prime", k_prime);
  rep.put("eps", opts.eps);
  StageTimer timer(rep);

  const double norm = condenser::cond_bounded_norm(fam, k, k_prime, opts.enumeration_limit);
  rep.put("bounded_norm", norm);
  const auto check = condenser::is_condenser(fam, k, k_prime, opts.eps, opts.enumeration_limit);
  rep.put_bool("is_condenser", check.ok);
  if (check.witness) {
    std::vector<double> w(check.witness->probs.data(),
                          check.witness->probs.data() + check.witness->probs.size());
    rep.put_array("witness_source", w);
  }
  timer.stage("classical");

  const long long kc = pow2_exact(k), kpc = pow2_exact(k_prime);
  const auto dense = condenser::densest_subgraph(to_graph(fam), kc, kpc, opts.enumeration_limit);
  rep.put_int("dense_value", dense.value);
  rep.put("dense_equivalence_residual",
          std::abs(static_cast<double>(kc) * fam.seed_count() * norm -
                   static_cast<double>(dense.value)));
  if (1 + fam.input_size() + fam.output_size() <= 40)
    rep.put("dense_sdp_relaxation",
            condenser::densest_sdp_relaxation(to_graph(fam), kc, kpc, opts.tol));
  timer.stage("dense");

  auto seesaw = opts.seesaw;
  seesaw.seed = opts.seed;
  seesaw.enumeration_limit = opts.enumeration_limit;
  std::vector<double> qs, lows;
  for (int q : opts.q_dims) {
    if (q > 6) continue;
    qs.push_back(q);
    lows.push_back(condenser::cond_cb_lower_seesaw(fam, k, k_prime, q, seesaw).value);
  }
  rep.put_array("cb_lower_q", qs);
  rep.put_array("cb_lower_scaled_pairing", lows);
  timer.stage("cb_lower");

  try {
    rep.put_report("game", build_game_report(fam, k, k_prime, opts));
  } catch (const SizeLimitError&) {
    // game sub-report omitted when the question spaces blow past the limit
  }
  timer.total();
  return rep;
}

Report build_game_report(const FunctionFamily& fam, double k, double k_prime,
                         const ReportOptions& opts) {
  Report rep;
  rep.put_int("schema_version", 1);
  rep.put_string("kind", "game");
  rep.put("k", k);
  rep.put("k_prime", k_prime);
  const auto g = game::build_game(fam, k, k_prime);
  rep.put_int("gamma", g.gamma);
  rep.put_int("gamma_prime", g.gamma_prime);
  StageTimer timer(rep);

  auto seesaw = opts.seesaw;
  seesaw.seed = opts.seed;
  seesaw.enumeration_limit = opts.enumeration_limit;
  rep.put("omega_classical", game::classical_value(g, opts.enumeration_limit));
  timer.stage("classical");

  std::vector<double> qs, vals;
  for (int q : opts.q_dims) {
    if (q > 4) continue;
    qs.push_back(q);
    vals.push_back(game::entangled_value_lower(g, q, seesaw).value);
  }
  rep.put_array("entangled_q", qs);
  rep.put_array("entangled_lower", vals);
  timer.stage("entangled");

  if (!opts.q_dims.empty() && opts.q_dims.front() <= 4) {
    const auto sw = game::sandwich_check(fam, k, k_prime, std::min(opts.q_dims.front(), 4), seesaw);
    rep.put("sandwich_scaled_norm", sw.scaled_norm);
    rep.put_bool("sandwich_left_ok", sw.left_ok);
    rep.put("sandwich_ratio_classical", sw.ratio_classical);
    rep.put("sandwich_entangled_value", sw.entangled_value);
    rep.put("sandwich_pairing_value", sw.cond_pairing_value);
    rep.put_bool("sandwich_quantum_ok", sw.quantum_ok);
    rep.put("sandwich_margin_alice_sum", sw.margin_alice_sum);
    rep.put("sandwich_margin_alice_cap", sw.margin_alice_cap);
    rep.put("sandwich_margin_bob_sum", sw.margin_bob_sum);
    rep.put("sandwich_margin_bob_cap", sw.margin_bob_cap);
  }
  timer.total();
  return rep;
}

}  // namespace extcond
