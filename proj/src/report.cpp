#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "idlabel/csv.hpp"
#include "idlabel/error.hpp"
#include "idlabel/experiment.hpp"

namespace idlabel {

namespace {

std::string num(double v, int digits = 6) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos) s = std::string(buf).substr(s.front() == '-' ? 1 : 0);
  return s;
}

std::string pct(double v) { return num(100.0 * v, 1) + "%"; }

std::vector<Model> available_models(const PredictionReport& r) {
  std::vector<Model> out;
  for (Model m : kAllModels) {
    if (r.available(m)) out.push_back(m);
  }
  return out;
}

std::string signal_label(const VignetteQuestion& q) {
  return q.task == 1 ? label(q.trait) : label(q.association);
}

void write_question_rows(std::ostream& out, const PredictionReport& r, int task) {
  const auto models = available_models(r);
  out << "question_id,question,condition,deflection";
  if (r.has_responses) out << ",empirical,ci_lo,ci_hi";
  for (Model m : models) out << ',' << column_name(m);
  out << '\n';
  for (const auto& q : r.questions) {
    if (q.task != task) continue;
    out << csv::escape(q.id) << ',' << csv::escape(q.text()) << ',' << csv::escape(signal_label(q)) << ','
        << label(q.deflection);
    if (r.has_responses) {
      const auto c = r.counts.find(q.id);
      if (c == r.counts.end()) {
        out << ",,,";
      } else {
        const auto& ci = r.intervals.at(q.id);
        out << ',' << num(c->second.proportion()) << ',' << num(ci.lo) << ',' << num(ci.hi);
      }
    }
    for (Model m : models) out << ',' << num(r.model(m).prob_first.at(q.id));
    out << '\n';
  }
}

void write_error_rows(std::ostream& out, const PredictionReport& r) {
  out << "question_id,task,condition,deflection,model,error,ci_lo,ci_hi\n";
  for (const auto& q : r.questions) {
    const auto c = r.counts.find(q.id);
    if (c == r.counts.end()) continue;
    const double empirical = c->second.proportion();
    const auto& ci = r.intervals.at(q.id);
    for (Model m : available_models(r)) {
      const double p = r.model(m).prob_first.at(q.id);
      out << csv::escape(q.id) << ',' << q.task << ',' << csv::escape(signal_label(q)) << ','
          << label(q.deflection) << ',' << column_name(m) << ',' << num(p - empirical) << ','
          << num(p - ci.hi) << ',' << num(p - ci.lo) << '\n';
    }
  }
}

void write_fit_row(std::ostream& out, const std::string& model, const std::string& scenario,
                   const std::string& parameter, double estimate, const FitResult& fit, std::size_t index) {
  const auto k = static_cast<Eigen::Index>(index);
  out << model << ',' << csv::escape(scenario) << ',' << csv::escape(parameter) << ',' << num(estimate) << ','
      << num(fit.std_errors[k]) << ',' << (fit.pinned[index] ? 1 : 0) << ',' << (fit.converged ? 1 : 0) << ','
      << (fit.separation_flag ? 1 : 0) << ',' << (fit.singular_flag ? 1 : 0) << ',' << num(fit.log_likelihood)
      << ',' << fit.iterations << '\n';
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  writer(out);
  if (!out) throw InputError("failed writing " + path.string());
}

}  // namespace

void write_predictions_csv(std::ostream& out, const PredictionReport& r) {
  const auto models = available_models(r);
  out << "question_id";
  if (r.has_responses) out << ",empirical,ci_lo,ci_hi";
  for (Model m : models) out << ',' << column_name(m);
  out << '\n';
  for (const auto& q : r.questions) {
    out << csv::escape(q.id);
    if (r.has_responses) {
      const auto c = r.counts.find(q.id);
      if (c == r.counts.end()) {
        out << ",,,";
      } else {
        const auto& ci = r.intervals.at(q.id);
        out << ',' << num(c->second.proportion()) << ',' << num(ci.lo) << ',' << num(ci.hi);
      }
    }
    for (Model m : models) out << ',' << num(r.model(m).prob_first.at(q.id));
    out << '\n';
  }
}

void write_mae_csv(std::ostream& out, const PredictionReport& r) {
  out << "model,group,questions,mae,ci_lo,ci_hi\n";
  for (Model m : available_models(r)) {
    for (const auto& g : r.groups) {
      const auto it = g.mae.find(m);
      if (it == g.mae.end()) continue;
      out << column_name(m) << ',' << csv::escape(g.group) << ',' << g.question_ids.size() << ','
          << num(it->second);
      if (g.group == "all" && r.overall_ci.contains(m)) {
        out << ',' << num(r.overall_ci.at(m).lo) << ',' << num(r.overall_ci.at(m).hi);
      } else {
        out << ",,";
      }
      out << '\n';
    }
  }
}

void write_fits_csv(std::ostream& out, const PredictionReport& r) {
  out << "model,scenario,parameter,estimate,std_error,pinned,converged,separation,singular,log_likelihood,"
         "iterations\n";
  if (r.pcs_prior_fit) {
    const auto& f = *r.pcs_prior_fit;
    write_fit_row(out, "pcs_est", "task " + std::to_string(f.task), "beta", f.beta, f.fit, 0);
  }
  for (const auto& s : r.pcs_fits) {
    for (std::size_t i = 0; i < s.identity_index.size(); ++i) {
      write_fit_row(out, "pcs_est", s.cue, s.identity_index[i], s.beta.scores.at(s.identity_index[i]), s.fit, i);
    }
  }
  if (r.lcss_fit) {
    static const std::array<const char*, 3> names = {"w_f", "w_ft", "w_fk"};
    for (std::size_t i = 0; i < 3; ++i) {
      write_fit_row(out, "lcss", "all", names[i], r.lcss_fit->estimates[static_cast<Eigen::Index>(i)], *r.lcss_fit, i);
    }
  }
}

void write_text_report(std::ostream& out, const PredictionReport& r) {
  out << "Identity labeling model comparison\n";
  out << "==================================\n\n";
  out << "Models:\n";
  for (const auto& m : r.models) {
    out << "  " << std::left << std::setw(20) << display_name(m.model);
    switch (m.status) {
      case ModelStatus::available: out << "ok"; break;
      case ModelStatus::unavailable: out << "unavailable: " << m.message; break;
      case ModelStatus::input_error: out << "input error: " << m.message; break;
      case ModelStatus::fit_error: out << "fit failed: " << m.message; break;
    }
    out << '\n';
  }
  if (r.lcss_weights) {
    out << "\nLCSS weights: w_f=" << num(r.lcss_weights->sentiment, 4) << " w_ft=" << num(r.lcss_weights->trait, 4)
        << " w_fk=" << num(r.lcss_weights->association, 4) << (r.lcss_fit ? " (estimated)" : " (fixed)") << '\n';
  }

  const auto models = available_models(r);
  out << "\nPredicted share choosing the first answer\n\n";
  out << std::left << std::setw(8) << "id" << std::setw(58) << "question";
  if (r.has_responses) out << std::right << std::setw(9) << "observed" << std::setw(17) << "95% CI";
  for (Model m : models) out << std::right << std::setw(10) << column_name(m);
  out << '\n';
  for (const auto& q : r.questions) {
    out << std::left << std::setw(8) << q.id << std::setw(58) << q.text().substr(0, 57);
    if (r.has_responses) {
      const auto c = r.counts.find(q.id);
      if (c == r.counts.end()) {
        out << std::right << std::setw(9) << "-" << std::setw(17) << "-";
      } else {
        const auto& ci = r.intervals.at(q.id);
        out << std::right << std::setw(9) << pct(c->second.proportion()) << std::setw(17)
            << ("[" + pct(ci.lo) + ", " + pct(ci.hi) + "]");
      }
    }
    for (Model m : models) out << std::right << std::setw(10) << pct(r.model(m).prob_first.at(q.id));
    out << '\n';
  }

  if (!r.has_responses) return;
  out << "\nMean absolute error\n\n";
  out << std::left << std::setw(70) << "group" << std::right << std::setw(4) << "n";
  for (Model m : models) out << std::setw(10) << column_name(m);
  out << '\n';
  for (const auto& g : r.groups) {
    out << std::left << std::setw(70) << g.group << std::right << std::setw(4) << g.question_ids.size();
    for (Model m : models) {
      const auto it = g.mae.find(m);
      out << std::setw(10) << (it == g.mae.end() ? "-" : pct(it->second));
    }
    out << '\n';
  }
  out << "\nOverall MAE with " << r.bootstrap.replicates << "-replicate respondent bootstrap (seed "
      << r.bootstrap.seed << ")\n\n";
  for (Model m : models) {
    if (!r.overall_mae.contains(m)) continue;
    const auto& ci = r.overall_ci.at(m);
    out << "  " << std::left << std::setw(20) << display_name(m) << pct(r.overall_mae.at(m)) << "  ["
        << pct(ci.lo) << ", " << pct(ci.hi) << "]\n";
  }
}

void write_lcss_weights(std::ostream& out, const LcssWeights& w) {
  out << "w_f,w_ft,w_fk\n" << num(w.sentiment, 10) << ',' << num(w.trait, 10) << ',' << num(w.association, 10) << '\n';
}

LcssWeights load_lcss_weights(const std::filesystem::path& path) {
  const auto rows = csv::read_file(path, {"w_f", "w_ft", "w_fk"});
  if (rows.size() != 1) throw InputError(path.string() + ": expected exactly one row of weights");
  const std::string where = path.string() + ":" + std::to_string(rows[0].line);
  return LcssWeights{csv::parse_real(rows[0].fields[0], where), csv::parse_real(rows[0].fields[1], where),
                     csv::parse_real(rows[0].fields[2], where)};
}

void emit_report(const PredictionReport& r, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "report.txt", [&](std::ostream& o) { write_text_report(o, r); });
  write_file(out_dir / "predictions.csv", [&](std::ostream& o) { write_predictions_csv(o, r); });
  write_file(out_dir / "figure_task1.csv", [&](std::ostream& o) { write_question_rows(o, r, 1); });
  write_file(out_dir / "figure_task2.csv", [&](std::ostream& o) { write_question_rows(o, r, 2); });
  if (r.has_responses) {
    write_file(out_dir / "figure_errors.csv", [&](std::ostream& o) { write_error_rows(o, r); });
    write_file(out_dir / "mae.csv", [&](std::ostream& o) { write_mae_csv(o, r); });
    write_file(out_dir / "fits.csv", [&](std::ostream& o) { write_fits_csv(o, r); });
  }
  if (r.lcss_weights) {
    write_file(out_dir / "lcss_weights.csv", [&](std::ostream& o) { write_lcss_weights(o, *r.lcss_weights); });
  }
}

}  // namespace idlabel
