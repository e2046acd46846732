#include "siglab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "siglab/checkpoint.hpp"
#include "siglab/es.hpp"

namespace siglab::experiment {

namespace fs = std::filesystem;

const char* const kCsvHeader =
    "run,iteration,accuracy,fitness,voc_sum,voc_mean,signal_entropy,"
    "target_certainty,signal_certainty,max_contextless_accuracy,"
    "sender_context_gain,receiver_context_gain";

namespace {

constexpr std::size_t kNumMetricColumns = 10;

const char* const kMetricNames[kNumMetricColumns] = {
    "accuracy",
    "fitness",
    "voc_sum",
    "voc_mean",
    "signal_entropy",
    "target_certainty",
    "signal_certainty",
    "max_contextless_accuracy",
    "sender_context_gain",
    "receiver_context_gain",
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::vector<double> metric_values(const metrics::MetricRecord& m) {
  return {m.accuracy,
          m.fitness,
          m.voc_sum,
          m.voc_mean,
          m.signal_entropy,
          m.target_certainty,
          m.signal_certainty,
          m.max_contextless_accuracy,
          m.sender_context_gain,
          m.receiver_context_gain};
}

struct CsvRow {
  std::size_t run;
  std::size_t iteration;
  double values[kNumMetricColumns];
};

std::vector<CsvRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("CSV: empty input");
  }
  if (line != kCsvHeader) {
    throw std::runtime_error("CSV: unexpected header: " + line);
  }
  std::vector<CsvRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string cell;
    CsvRow row{};
    for (std::size_t c = 0; c < 2 + kNumMetricColumns; ++c) {
      if (!std::getline(cells, cell, ',')) {
        throw std::runtime_error("CSV: line " + std::to_string(line_no) +
                                 ": expected 12 columns");
      }
      try {
        if (c == 0) {
          row.run = std::stoul(cell);
        } else if (c == 1) {
          row.iteration = std::stoul(cell);
        } else {
          row.values[c - 2] = std::stod(cell);
        }
      } catch (const std::exception&) {
        throw std::runtime_error("CSV: line " + std::to_string(line_no) +
                                 ": bad value '" + cell + "'");
      }
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw std::runtime_error("CSV: no data rows");
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::string format_csv_row(std::size_t run, std::size_t iteration,
                           const metrics::MetricRecord& m) {
  std::ostringstream out;
  out << run << ',' << iteration;
  for (double v : metric_values(m)) out << ',' << format_double(v);
  return out.str();
}

Summary summarize_csv(const std::string& csv_text) {
  const std::vector<CsvRow> rows = parse_csv(csv_text);
  // Final logged iteration per run.
  std::map<std::size_t, CsvRow> final_rows;
  for (const auto& row : rows) {
    auto it = final_rows.find(row.run);
    if (it == final_rows.end() || row.iteration >= it->second.iteration) {
      final_rows[row.run] = row;
    }
  }
  Summary summary;
  for (std::size_t c = 0; c < kNumMetricColumns; ++c) {
    SummaryStat stat;
    double sum = 0.0;
    stat.min = stat.max = final_rows.begin()->second.values[c];
    for (const auto& [run, row] : final_rows) {
      const double v = row.values[c];
      sum += v;
      stat.min = std::min(stat.min, v);
      stat.max = std::max(stat.max, v);
    }
    const double n = double(final_rows.size());
    stat.mean = sum / n;
    if (final_rows.size() > 1) {
      double ss = 0.0;
      for (const auto& [run, row] : final_rows) {
        const double d = row.values[c] - stat.mean;
        ss += d * d;
      }
      stat.std = std::sqrt(ss / (n - 1.0));
    }
    summary[kMetricNames[c]] = stat;
  }
  return summary;
}

std::string format_summary(const std::string& condition, const Summary& s) {
  std::ostringstream out;
  out << "condition,metric,mean,std,min,max\n";
  // Emit in CSV column order rather than map order.
  for (const char* name : kMetricNames) {
    const SummaryStat& stat = s.at(name);
    out << condition << ',' << name << ',' << format_double(stat.mean) << ','
        << format_double(stat.std) << ',' << format_double(stat.min) << ','
        << format_double(stat.max) << '\n';
  }
  return out.str();
}

std::string condition_label(const config::ExperimentConfig& cfg) {
  std::string label = agents::to_string(cfg.sender_kind);
  if (cfg.es.p_voc > 0.0) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", cfg.es.p_voc);
    label += " + ";
    label += buf;
    label += "pVoc";
  }
  return label;
}

namespace {

struct RunOutput {
  std::vector<std::string> rows;  // formatted CSV rows
};

void execute_run(const config::ExperimentConfig& cfg, std::size_t run,
                 std::size_t threads, const std::string& out_dir,
                 RunOutput& output, std::ofstream* live_csv) {
  const evaluator::Evaluator evaluator(cfg.world, cfg.arch());
  es::TrainConfig train_cfg;
  train_cfg.es = cfg.es;
  train_cfg.iterations = cfg.iterations;
  train_cfg.seed = cfg.master_seed + run;
  train_cfg.init_sigma = cfg.init_sigma;
  train_cfg.threads = threads;

  es::train(evaluator, train_cfg,
            [&](std::size_t iter, const nn::ParamVec& theta,
                const es::AdamWState& state, const es::MetricsFn& metrics_fn) {
              const bool last = iter == cfg.iterations;
              if (iter % cfg.metric_every == 0 || last) {
                const std::string row =
                    format_csv_row(run, iter, metrics_fn());
                output.rows.push_back(row);
                if (live_csv != nullptr) {
                  *live_csv << row << '\n';
                  live_csv->flush();
                }
              }
              if (cfg.checkpoint_every > 0 && iter > 0 &&
                  iter % cfg.checkpoint_every == 0 && !last) {
                checkpoint::save(out_dir + "/run" + std::to_string(run) +
                                     "_iter" + std::to_string(iter) + ".ckpt",
                                 theta, state);
              }
              if (last) {
                const std::string base =
                    out_dir + "/run" + std::to_string(run) + "_final";
                checkpoint::save(base + ".ckpt", theta, state);
                std::ofstream sidecar(base + ".txt");
                sidecar << "# checkpoint sidecar\n"
                        << "run = " << run << "\n"
                        << "run_seed = " << train_cfg.seed << "\n"
                        << "final_iteration = " << iter << "\n"
                        << to_text(cfg);
              }
              return true;
            });
}

}  // namespace

int run_experiment(const config::ExperimentConfig& cfg,
                   const RunExperimentOptions& options) {
  cfg.validate();
  fs::create_directories(cfg.output_dir);
  const std::string csv_path = cfg.output_dir + "/metrics.csv";

  std::vector<RunOutput> outputs(cfg.runs);
  if (options.parallel_runs && cfg.runs > 1) {
    std::vector<std::thread> pool;
    pool.reserve(cfg.runs);
    for (std::size_t r = 0; r < cfg.runs; ++r) {
      pool.emplace_back([&, r] {
        execute_run(cfg, r, 1, cfg.output_dir, outputs[r], nullptr);
      });
    }
    for (auto& t : pool) t.join();
    std::ofstream csv(csv_path, std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot write " + csv_path);
    csv << kCsvHeader << '\n';
    for (const auto& out : outputs) {
      for (const auto& row : out.rows) csv << row << '\n';
    }
  } else {
    std::ofstream csv(csv_path, std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot write " + csv_path);
    csv << kCsvHeader << '\n';
    csv.flush();
    for (std::size_t r = 0; r < cfg.runs; ++r) {
      if (!options.quiet) {
        std::fprintf(stderr, "[siglab] run %zu/%zu (%s)\n", r + 1, cfg.runs,
                     condition_label(cfg).c_str());
      }
      execute_run(cfg, r, options.threads, cfg.output_dir, outputs[r], &csv);
    }
  }

  const Summary summary = summarize_csv(read_file(csv_path));
  std::ofstream summary_file(cfg.output_dir + "/summary.csv", std::ios::trunc);
  summary_file << format_summary(condition_label(cfg), summary);
  return summary_file ? 0 : 1;
}

ProtocolReport protocol_report(const config::ExperimentConfig& cfg,
                               const nn::ParamVec& theta,
                               const ProtocolOptions& options) {
  const evaluator::Evaluator evaluator(cfg.world, cfg.arch());
  agents::AgentPair pair = agents::AgentPair::build(cfg.arch());
  pair.load(theta);
  agents::Workspace ws = pair.make_workspace();
  const auto& objects = evaluator.objects();
  const std::size_t k = cfg.world.context_size;

  ProtocolReport report;
  Rng rng(derive_seed(options.seed, 0x9c));
  for (const auto& target : objects) {
    for (std::size_t c = 0; c < options.contexts_per_target; ++c) {
      // Context containing the target: distractors drawn without
      // replacement, target at a random position.
      std::vector<world::ObjectId> others;
      for (const auto& o : objects) {
        if (o.id != target.id) others.push_back(o.id);
      }
      for (std::size_t i = 0; i + 1 < k; ++i) {
        const std::size_t j = i + rng.uniform_index(others.size() - i);
        std::swap(others[i], others[j]);
      }
      std::vector<world::ObjectId> ctx(others.begin(), others.begin() + (k - 1));
      ctx.insert(ctx.begin() + rng.uniform_index(k), target.id);

      std::vector<const double*> encodings(k);
      for (std::size_t i = 0; i < k; ++i) {
        encodings[i] = objects[ctx[i]].encoding.data();
      }
      std::vector<double> probs(cfg.signal_length);
      if (cfg.sender_kind == agents::SenderKind::T) {
        agents::emit_probs_T(pair, target.encoding.data(), ws, probs.data());
      } else {
        agents::emit_probs_TC(pair, target.encoding.data(), encodings, ws,
                              probs.data());
      }
      ProtocolReport::Emission emission;
      emission.target_id = target.id;
      emission.context_ids = ctx;
      for (std::size_t s = 0; s < options.emission_samples; ++s) {
        const agents::SignalVec sig = agents::sample_signal(probs, rng);
        emission.signal_freq[sig.key()] += 1.0;
      }
      for (auto& [key, freq] : emission.signal_freq) {
        freq /= double(options.emission_samples);
      }
      report.emissions.push_back(std::move(emission));
    }
  }

  const evaluator::BatchResult batch =
      evaluator.run_batch(theta, options.referent_episodes, cfg.es.p_voc,
                          derive_seed(options.seed, 0x9d));
  std::map<std::uint32_t, std::size_t> signal_totals;
  for (const auto& ep : batch.episodes) {
    const std::uint32_t key = ep.signal.key();
    ++signal_totals[key];
    report.referents[key][ep.target_id] += 1.0;
  }
  for (auto& [key, dist] : report.referents) {
    for (auto& [target, p] : dist) p /= double(signal_totals[key]);
  }
  return report;
}

namespace {

std::string signal_bits_string(std::uint32_t key, std::size_t m) {
  std::string s(m, '0');
  for (std::size_t j = 0; j < m; ++j) {
    if (key & (std::uint32_t(1) << j)) s[j] = '1';
  }
  return s;
}

std::string join_ids(const std::vector<world::ObjectId>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) s += '|';
    s += std::to_string(ids[i]);
  }
  return s;
}

}  // namespace

std::string format_protocol_report(const ProtocolReport& report) {
  std::size_t m = 0;
  if (!report.emissions.empty() && !report.emissions.front().signal_freq.empty()) {
    // Recover the bit width from the widest key seen.
    std::uint32_t max_key = 0;
    for (const auto& e : report.emissions) {
      for (const auto& [key, freq] : e.signal_freq) max_key = std::max(max_key, key);
    }
    for (const auto& [key, dist] : report.referents) max_key = std::max(max_key, key);
    while ((std::uint32_t(1) << m) <= max_key) ++m;
    m = std::max<std::size_t>(m, 1);
  }
  std::ostringstream out;
  out << "# section: emissions\n";
  out << "target_id,context_ids,signal,frequency\n";
  for (const auto& e : report.emissions) {
    for (const auto& [key, freq] : e.signal_freq) {
      out << e.target_id << ',' << join_ids(e.context_ids) << ','
          << signal_bits_string(key, m) << ',' << format_double(freq) << '\n';
    }
  }
  out << "# section: referents\n";
  out << "signal,target_id,probability\n";
  for (const auto& [key, dist] : report.referents) {
    for (const auto& [target, p] : dist) {
      out << signal_bits_string(key, m) << ',' << target << ','
          << format_double(p) << '\n';
    }
  }
  return out.str();
}

namespace {

struct Series {
  std::vector<double> x;
  std::vector<double> y;
};

std::string svg_chart(const std::string& title,
                      const std::vector<Series>& runs,
                      const Series& mean, const Series& se) {
  const double width = 720, height = 440;
  const double ml = 70, mr = 20, mt = 40, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : runs) {
    for (double v : s.x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
    for (double v : s.y) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
  }
  for (std::size_t i = 0; i < mean.x.size(); ++i) {
    ymin = std::min(ymin, mean.y[i] - se.y[i]);
    ymax = std::max(ymax, mean.y[i] + se.y[i]);
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) { ymax = ymin + 1.0; ymin -= 1.0; }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;
  auto sx = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * (width - ml - mr); };
  auto sy = [&](double v) { return height - mb - (v - ymin) / (ymax - ymin) * (height - mt - mb); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
      << width - mr << "\" y2=\"" << height - mb
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  auto label = [&](double x, double y, const std::string& anchor, double v) {
    out << "<text x=\"" << x << "\" y=\"" << y << "\" text-anchor=\"" << anchor
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << format_double(v)
        << "</text>\n";
  };
  label(ml, height - mb + 18, "middle", xmin);
  label(width - mr, height - mb + 18, "middle", xmax);
  label(ml - 8, height - mb + 4, "end", ymin);
  label(ml - 8, mt + 4, "end", ymax);
  // standard-error band around the mean
  if (mean.x.size() > 1) {
    out << "<polygon fill=\"#4477aa\" fill-opacity=\"0.25\" stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < mean.x.size(); ++i) {
      out << sx(mean.x[i]) << ',' << sy(mean.y[i] + se.y[i]) << ' ';
    }
    for (std::size_t i = mean.x.size(); i-- > 0;) {
      out << sx(mean.x[i]) << ',' << sy(mean.y[i] - se.y[i]) << ' ';
    }
    out << "\"/>\n";
  }
  for (const auto& s : runs) {
    out << "<polyline fill=\"none\" stroke=\"#999999\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out << sx(s.x[i]) << ',' << sy(s.y[i]) << ' ';
    }
    out << "\"/>\n";
  }
  out << "<polyline fill=\"none\" stroke=\"#4477aa\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < mean.x.size(); ++i) {
    out << sx(mean.x[i]) << ',' << sy(mean.y[i]) << ' ';
  }
  out << "\"/>\n";
  if (mean.x.size() == 1) {
    // Degenerate single-point chart: draw the point itself.
    out << "<circle cx=\"" << sx(mean.x[0]) << "\" cy=\"" << sy(mean.y[0])
        << "\" r=\"3\" fill=\"#4477aa\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace

std::vector<std::string> plot_metrics(const std::string& csv_path,
                                      const std::string& out_dir) {
  const std::vector<CsvRow> rows = parse_csv(read_file(csv_path));
  fs::create_directories(out_dir);
  std::set<std::size_t> run_ids;
  for (const auto& row : rows) run_ids.insert(row.run);

  std::vector<std::string> written;
  for (std::size_t c = 0; c < kNumMetricColumns; ++c) {
    std::vector<Series> runs;
    for (std::size_t run : run_ids) {
      Series s;
      for (const auto& row : rows) {
        if (row.run == run) {
          s.x.push_back(double(row.iteration));
          s.y.push_back(row.values[c]);
        }
      }
      runs.push_back(std::move(s));
    }
    // Mean and standard error across runs at matching iterations.
    std::map<std::size_t, std::vector<double>> by_iter;
    for (const auto& row : rows) by_iter[row.iteration].push_back(row.values[c]);
    Series mean, se;
    for (const auto& [iter, values] : by_iter) {
      double sum = 0.0;
      for (double v : values) sum += v;
      const double mu = sum / double(values.size());
      double ss = 0.0;
      for (double v : values) ss += (v - mu) * (v - mu);
      const double sd = values.size() > 1
                            ? std::sqrt(ss / double(values.size() - 1))
                            : 0.0;
      mean.x.push_back(double(iter));
      mean.y.push_back(mu);
      se.x.push_back(double(iter));
      se.y.push_back(sd / std::sqrt(double(values.size())));
    }
    const std::string path = out_dir + "/" + kMetricNames[c] + ".svg";
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << svg_chart(kMetricNames[c], runs, mean, se);
    written.push_back(path);
  }
  return written;
}

}  // namespace siglab::experiment
