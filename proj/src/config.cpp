#include "siglab/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace siglab::config {

agents::ArchSpec ExperimentConfig::arch() const {
  agents::ArchSpec a;
  a.kind = sender_kind;
  a.obj_encoding_len = world.encoding_length();
  a.signal_length = signal_length;
  return a;
}

void ExperimentConfig::validate() const {
  world.validate();
  es.validate();
  if (signal_length == 0 || signal_length > 30) {
    throw std::invalid_argument("signal_length must be in [1, 30]");
  }
  if (runs == 0) throw std::invalid_argument("runs must be positive");
  if (es.p_voc < 0.0) throw std::invalid_argument("p_voc must be nonnegative");
  if (init_sigma <= 0.0) throw std::invalid_argument("init_sigma must be positive");
}

namespace {

struct Parser {
  std::string origin;
  std::size_t line_no = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": " + msg);
  }

  std::size_t parse_count(const std::string& v, std::size_t min_value = 1) const {
    std::size_t pos = 0;
    unsigned long long n = 0;
    try {
      n = std::stoull(v, &pos);
    } catch (const std::exception&) {
      fail("expected a nonnegative integer, got '" + v + "'");
    }
    if (pos != v.size()) fail("trailing characters after integer '" + v + "'");
    if (n < min_value) {
      fail("value " + v + " below minimum " + std::to_string(min_value));
    }
    return std::size_t(n);
  }

  double parse_real(const std::string& v, double min_value,
                    bool exclusive = false) const {
    std::size_t pos = 0;
    double d = 0.0;
    try {
      d = std::stod(v, &pos);
    } catch (const std::exception&) {
      fail("expected a number, got '" + v + "'");
    }
    if (pos != v.size()) fail("trailing characters after number '" + v + "'");
    if (exclusive ? d <= min_value : d < min_value) {
      fail("value " + v + " out of range");
    }
    return d;
  }

  bool parse_bool(const std::string& v) const {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail("expected true/false, got '" + v + "'");
  }
};

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace((unsigned char)s[b])) ++b;
  while (e > b && std::isspace((unsigned char)s[e - 1])) --e;
  return s.substr(b, e - b);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin) {
  ExperimentConfig cfg;
  Parser p{origin};
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++p.line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) p.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) p.fail("expected 'key = value'");

    if (key == "num_properties") {
      cfg.world.num_properties = p.parse_count(value);
    } else if (key == "values_per_property") {
      cfg.world.values_per_property = p.parse_count(value);
    } else if (key == "context_size") {
      cfg.world.context_size = p.parse_count(value, 2);
    } else if (key == "sender_kind") {
      if (value == "T") {
        cfg.sender_kind = agents::SenderKind::T;
      } else if (value == "TC") {
        cfg.sender_kind = agents::SenderKind::TC;
      } else {
        p.fail("sender_kind must be T or TC, got '" + value + "'");
      }
    } else if (key == "signal_length") {
      cfg.signal_length = p.parse_count(value);
    } else if (key == "p_voc") {
      cfg.es.p_voc = p.parse_real(value, 0.0);
    } else if (key == "population") {
      const std::size_t n = p.parse_count(value, 2);
      if (n % 2 != 0) p.fail("population must be even (mirrored sampling)");
      cfg.es.population = n;
    } else if (key == "noise_sigma") {
      cfg.es.noise_sigma = p.parse_real(value, 0.0, /*exclusive=*/true);
    } else if (key == "lr_sender") {
      cfg.es.lr_sender = p.parse_real(value, 0.0, /*exclusive=*/true);
      cfg.lr_sender_explicit = true;
    } else if (key == "lr_receiver") {
      cfg.es.lr_receiver = p.parse_real(value, 0.0, /*exclusive=*/true);
    } else if (key == "weight_decay") {
      cfg.es.weight_decay = p.parse_real(value, 0.0);
    } else if (key == "episodes_per_eval") {
      cfg.es.episodes_per_eval = p.parse_count(value);
    } else if (key == "fitness_shaping") {
      cfg.es.fitness_shaping = p.parse_bool(value);
    } else if (key == "init_sigma") {
      cfg.init_sigma = p.parse_real(value, 0.0, /*exclusive=*/true);
    } else if (key == "iterations") {
      cfg.iterations = p.parse_count(value, 0);
    } else if (key == "runs") {
      cfg.runs = p.parse_count(value);
    } else if (key == "master_seed") {
      cfg.master_seed = p.parse_count(value, 0);
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "checkpoint_every") {
      cfg.checkpoint_every = p.parse_count(value, 0);
    } else if (key == "metric_every") {
      cfg.metric_every = p.parse_count(value);
    } else {
      p.fail("unknown key '" + key + "'");
    }
  }
  if (!cfg.lr_sender_explicit) {
    cfg.es.lr_sender = cfg.sender_kind == agents::SenderKind::TC ? 0.05 : 0.02;
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(origin + ": " + e.what());
  }
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string to_text(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "num_properties = " << cfg.world.num_properties << "\n"
      << "values_per_property = " << cfg.world.values_per_property << "\n"
      << "context_size = " << cfg.world.context_size << "\n"
      << "sender_kind = " << agents::to_string(cfg.sender_kind) << "\n"
      << "signal_length = " << cfg.signal_length << "\n"
      << "p_voc = " << cfg.es.p_voc << "\n"
      << "population = " << cfg.es.population << "\n"
      << "noise_sigma = " << cfg.es.noise_sigma << "\n"
      << "lr_sender = " << cfg.es.lr_sender << "\n"
      << "lr_receiver = " << cfg.es.lr_receiver << "\n"
      << "weight_decay = " << cfg.es.weight_decay << "\n"
      << "episodes_per_eval = " << cfg.es.episodes_per_eval << "\n"
      << "fitness_shaping = " << (cfg.es.fitness_shaping ? "true" : "false") << "\n"
      << "init_sigma = " << cfg.init_sigma << "\n"
      << "iterations = " << cfg.iterations << "\n"
      << "runs = " << cfg.runs << "\n"
      << "master_seed = " << cfg.master_seed << "\n"
      << "output_dir = " << cfg.output_dir << "\n"
      << "checkpoint_every = " << cfg.checkpoint_every << "\n"
      << "metric_every = " << cfg.metric_every << "\n";
  return out.str();
}

}  // namespace siglab::config
