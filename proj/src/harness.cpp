#include "dwls/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dwls/parallel.hpp"

namespace dwls {
namespace {

struct Stats {
  double mean = 0.0;
  double std_err = 0.0;
};

Stats summarize_stats(std::span<const double> values) {
  Stats s;
  const auto n = values.size();
  if (n == 0) return s;
  s.mean = pairwise_sum(values) / static_cast<double>(n);
  if (n > 1) {
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (values[i] - s.mean) * (values[i] - s.mean);
    const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
    s.std_err = std::sqrt(var / static_cast<double>(n));
  }
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed: " + path.string());
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

}  // namespace

void ExperimentConfig::validate() const {
  if (l_values.empty()) throw Error("l_values must not be empty");
  for (auto l : l_values) {
    if (l == 0) throw Error("word limits must be positive");
  }
  if (betas.empty()) throw Error("betas must not be empty");
  for (double b : betas) {
    if (!(b > 0.0 && b < 1.0)) throw Error("betas must lie in (0,1)");
  }
  if (mechanisms.empty()) throw Error("no mechanisms selected");
  if (threads == 0) throw Error("threads must be positive");
  summarizer.validate();
  if (!corpus_path) corpus.validate();
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig cfg) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw Error("config " + path + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "corpus_path") cfg.corpus_path = value.get<std::string>();
      else if (key == "n_queries") cfg.corpus.n_queries = value.get<std::size_t>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "ads_min") cfg.corpus.ads_min = value.get<std::size_t>();
      else if (key == "ads_max") cfg.corpus.ads_max = value.get<std::size_t>();
      else if (key == "bid_mu") cfg.corpus.bid_mu = value.get<double>();
      else if (key == "bid_sigma") cfg.corpus.bid_sigma = value.get<double>();
      else if (key == "words_min") cfg.corpus.words_min = value.get<std::size_t>();
      else if (key == "words_max") cfg.corpus.words_max = value.get<std::size_t>();
      else if (key == "distinct_tokens") cfg.corpus.distinct_tokens = value.get<bool>();
      else if (key == "l_values") cfg.l_values = value.get<std::vector<std::size_t>>();
      else if (key == "betas") cfg.betas = value.get<std::vector<double>>();
      else if (key == "mechanisms") {
        cfg.mechanisms.clear();
        for (const auto& m : value) cfg.mechanisms.push_back(parse_mechanism_kind(m.get<std::string>()));
      } else if (key == "summarizer") cfg.summarizer.kind = parse_summarizer_kind(value.get<std::string>());
      else if (key == "endpoint") cfg.summarizer.endpoint = value.get<std::string>();
      else if (key == "timeout_ms") cfg.summarizer.timeout_ms = value.get<int>();
      else if (key == "prompt_template_path") cfg.summarizer.prompt_template_path = value.get<std::string>();
      else if (key == "fallback_to_truncation") cfg.summarizer.fallback_to_truncation = value.get<bool>();
      else if (key == "out_dir") cfg.out_dir = value.get<std::string>();
      else if (key == "pos_base") cfg.pos_base = value.get<double>();
      else if (key == "max_slots") cfg.max_slots = value.get<std::size_t>();
      else if (key == "threads") cfg.threads = value.get<std::size_t>();
      else if (key == "plots") cfg.plots = value.get<bool>();
      else if (key == "payment_tol") cfg.payment_tol = value.get<double>();
      else throw Error("config " + path + ": unknown key '" + key + "'");
    } catch (const nlohmann::json::exception&) {
      throw Error("config " + path + ": bad value for '" + key + "'");
    }
  }
  return cfg;
}

Corpus experiment_corpus(const ExperimentConfig& config) {
  if (config.corpus_path) return load(*config.corpus_path);
  CorpusSpec spec = config.corpus;
  spec.seed = config.seed;
  return generate(spec);
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config, const Corpus& corpus) {
  config.validate();
  const auto summarizer = make_summarizer(config.summarizer);
  const std::size_t nq = corpus.size();
  const std::size_t nb = config.betas.size();
  std::vector<ResultRow> rows;

  for (std::size_t l : config.l_values) {
    // welfare[mechanism][beta][query]
    std::vector<std::vector<std::vector<double>>> welfare(
        config.mechanisms.size(), std::vector<std::vector<double>>(nb, std::vector<double>(nq)));

    for (std::size_t m = 0; m < config.mechanisms.size(); ++m) {
      const MechanismKind kind = config.mechanisms[m];
      const bool per_beta = kind == MechanismKind::gpa_dwls;
      const std::size_t passes = per_beta ? nb : 1;
      for (std::size_t pass = 0; pass < passes; ++pass) {
        MechanismSpec spec;
        spec.kind = kind;
        spec.params = EvalParams::make(config.betas[pass], l, config.pos_base, config.max_slots);
        spec.summarizer = config.summarizer;
        const auto mechanism = make_mechanism(spec);
        parallel_for(nq, config.threads, [&](std::size_t q) {
          const auto outcome = mechanism->run(corpus[q]);
          const auto bundle = render_bundle(corpus[q].ads, outcome, *summarizer);
          if (per_beta) {
            welfare[m][pass][q] = dwls::welfare(corpus[q], bundle, spec.params).total_welfare;
            return;
          }
          for (std::size_t b = 0; b < nb; ++b) {
            const auto params =
                EvalParams::make(config.betas[b], l, config.pos_base, config.max_slots);
            welfare[m][b][q] = dwls::welfare(corpus[q], bundle, params).total_welfare;
          }
        });
      }
    }

    for (std::size_t b = 0; b < nb; ++b) {
      for (std::size_t m = 0; m < config.mechanisms.size(); ++m) {
        const auto s = summarize_stats(welfare[m][b]);
        rows.push_back({l, config.betas[b], config.mechanisms[m], s.mean, s.std_err, nq});
      }
    }
  }
  return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto corpus = experiment_corpus(config);
  const auto rows = run_experiment(config, corpus);
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) throw Error("cannot create output directory " + config.out_dir);
  const std::filesystem::path dir(config.out_dir);
  write_file(dir / "results.csv", results_csv(rows));
  if (config.plots) {
    for (double beta : config.betas) {
      write_file(dir / ("welfare_beta_" + fixed(beta, 4) + ".svg"), welfare_plot_svg(rows, beta));
    }
  }
  return rows;
}

std::vector<PaymentRow> report_payments(const ExperimentConfig& config, const Corpus& corpus,
                                        std::size_t word_limit, double beta) {
  MechanismSpec spec;
  spec.kind = MechanismKind::gpa_dwls;
  spec.params = EvalParams::make(beta, word_limit, config.pos_base, config.max_slots);
  spec.compute_payments = true;
  spec.payment_tol = config.payment_tol;

  std::vector<std::vector<PaymentRow>> per_query(corpus.size());
  parallel_for(corpus.size(), config.threads, [&](std::size_t q) {
    const auto& query = corpus[q];
    const auto out = run_gpa(query, spec);
    for (std::size_t i = 0; i < query.ads.size(); ++i) {
      const auto& ad = query.ads[i];
      const double p = out.payments->at(i);
      const double q_i = out.internal_pctr[i];
      if (p < 0.0 || p > ad.bid * q_i + 1e-12) {
        throw Error("individual rationality violated for ad " + ad.ad_id);
      }
      per_query[q].push_back({query.query_id, ad.ad_id, ad.bid, out.prominence[i],
                              out.word_budgets[i], p, q_i});
    }
  });
  std::vector<PaymentRow> rows;
  for (auto& v : per_query) rows.insert(rows.end(), v.begin(), v.end());
  return rows;
}

std::string results_csv(std::span<const ResultRow> rows) {
  std::string out = std::string(kResultsHeader) + "\n";
  for (const auto& r : rows) {
    out += std::to_string(r.l) + "," + format_double(r.beta) + "," +
           std::string(to_string(r.mechanism)) + "," + format_double(r.mean_welfare) + "," +
           format_double(r.std_err) + "," + std::to_string(r.n_queries) + "\n";
  }
  return out;
}

std::string payments_csv(std::span<const PaymentRow> rows) {
  std::string out = std::string(kPaymentsHeader) + "\n";
  for (const auto& r : rows) {
    out += r.query_id + "," + r.ad_id + "," + format_double(r.bid) + "," +
           format_double(r.prominence) + "," + std::to_string(r.budget) + "," +
           format_double(r.payment) + "," + format_double(r.internal_pctr) + "\n";
  }
  return out;
}

std::string welfare_plot_svg(std::span<const ResultRow> rows, double beta) {
  constexpr double W = 640, H = 420, left = 70, right = 170, top = 40, bottom = 60;
  std::vector<ResultRow> sel;
  for (const auto& r : rows) {
    if (r.beta == beta) sel.push_back(r);
  }
  std::set<std::size_t> ls;
  double ymax = 0.0;
  for (const auto& r : sel) {
    ls.insert(r.l);
    ymax = std::max(ymax, r.mean_welfare + r.std_err);
  }
  if (ymax <= 0.0) ymax = 1.0;
  ymax *= 1.1;
  const double lmin = ls.empty() ? 0.0 : static_cast<double>(*ls.begin());
  double lmax = ls.empty() ? 1.0 : static_cast<double>(*ls.rbegin());
  if (lmax == lmin) lmax = lmin + 1.0;
  const auto px = [&](double l) { return left + (l - lmin) / (lmax - lmin) * (W - left - right); };
  const auto py = [&](double v) { return H - bottom - v / ymax * (H - top - bottom); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << "Mean welfare vs total words (beta=" << fixed(beta, 4) << ")</text>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right
      << "\" y2=\"" << H - bottom << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << H - bottom << "\" stroke=\"black\"/>\n";
  for (std::size_t l : ls) {
    const double x = px(static_cast<double>(l));
    svg << "<line x1=\"" << x << "\" y1=\"" << H - bottom << "\" x2=\"" << x << "\" y2=\""
        << H - bottom + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << x << "\" y=\"" << H - bottom + 20 << "\" text-anchor=\"middle\">"
        << l << "</text>\n";
  }
  for (int k = 0; k <= 5; ++k) {
    const double v = ymax * k / 5.0;
    svg << "<text x=\"" << left - 8 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">"
        << fixed(v, 2) << "</text>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << py(v) << "\" x2=\"" << W - right
        << "\" y2=\"" << py(v) << "\" stroke=\"#dddddd\"/>\n";
  }
  svg << "<text x=\"" << (left + W - right) / 2 << "\" y=\"" << H - 15
      << "\" text-anchor=\"middle\">total words L</text>\n";
  svg << "<text x=\"18\" y=\"" << (top + H - bottom) / 2 << "\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 18 " << (top + H - bottom) / 2 << ")\">mean welfare</text>\n";

  constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c"};
  int series = 0;
  for (MechanismKind kind : {MechanismKind::gpa_dwls, MechanismKind::greedy,
                             MechanismKind::pos_fixed_length}) {
    std::vector<ResultRow> pts;
    for (const auto& r : sel) {
      if (r.mechanism == kind) pts.push_back(r);
    }
    if (pts.empty()) continue;
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.l < b.l; });
    const char* color = colors[static_cast<int>(kind)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& p : pts) {
      svg << px(static_cast<double>(p.l)) << "," << py(p.mean_welfare) << " ";
    }
    svg << "\"/>\n";
    for (const auto& p : pts) {
      svg << "<circle cx=\"" << px(static_cast<double>(p.l)) << "\" cy=\"" << py(p.mean_welfare)
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = top + 20 + 20 * series++;
    svg << "<line x1=\"" << W - right + 15 << "\" y1=\"" << ly << "\" x2=\"" << W - right + 35
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << W - right + 40 << "\" y=\"" << ly + 4 << "\">" << to_string(kind)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double parse_real(const std::string& s) {
  const auto slash = s.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const double v = std::stod(s, &used);
      if (used != s.size()) throw Error("");
      return v;
    }
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    const double a = std::stod(num, &used);
    if (used != num.size()) throw Error("");
    const double b = std::stod(den, &used);
    if (used != den.size() || b == 0.0) throw Error("");
    return a / b;
  } catch (const std::exception&) {
    throw Error("not a number: " + s);
  }
}

}  // namespace dwls
