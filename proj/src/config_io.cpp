#include "axonctl/config_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace axonctl {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Section-qualified key ("bio.D") -> raw value string.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_sections(std::istream& in, const std::string& origin) {
  KeyValues kv;
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": malformed section header '" + line + "'");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    }
    if (section.empty()) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": key '" +
                        key + "' appears before any [section]");
    }
    kv[section + "." + key] = value;
  }
  return kv;
}

double parse_double(const std::string& key, const std::string& raw) {
  try {
    std::size_t used = 0;
    const double v = std::stod(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": cannot parse '" + raw + "' as a number");
  }
}

int parse_int(const std::string& key, const std::string& raw) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": cannot parse '" + raw + "' as an integer");
  }
}

struct Reader {
  const KeyValues& kv;
  void get(const std::string& key, double& out) const {
    auto it = kv.find(key);
    if (it != kv.end()) out = parse_double(key, it->second);
  }
  void get(const std::string& key, int& out) const {
    auto it = kv.find(key);
    if (it != kv.end()) out = parse_int(key, it->second);
  }
  void get(const std::string& key, std::string& out) const {
    auto it = kv.find(key);
    if (it != kv.end()) out = it->second;
  }
};

InitialProfile parse_c0(const std::string& raw, const std::string& cfg_dir) {
  InitialProfile p;
  auto colon = raw.find(':');
  const std::string tag = colon == std::string::npos ? raw : raw.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : raw.substr(colon + 1);
  if (tag == "constant") {
    p.kind = InitialProfile::Kind::constant_scale;
    p.scale = parse_double("scenario.c0", arg);
    return p;
  }
  if (tag == "file") {
    p.kind = InitialProfile::Kind::tabulated;
    p.path = arg;
    std::string full = arg;
    if (!arg.empty() && arg.front() != '/' && !cfg_dir.empty()) {
      full = cfg_dir + "/" + arg;
    }
    std::ifstream in(full);
    if (!in) throw ConfigError("scenario.c0: cannot open profile file " + full);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty() || line.front() == '#') continue;
      if (first && line.find_first_not_of("0123456789+-.eE, \t") !=
                       std::string::npos) {
        first = false;  // header row
        continue;
      }
      first = false;
      std::istringstream row(line);
      std::string a, b;
      if (!std::getline(row, a, ',') || !std::getline(row, b)) {
        throw ConfigError("scenario.c0: malformed row '" + line + "' in " +
                          full);
      }
      p.sigma.push_back(parse_double("scenario.c0 sigma", trim(a)));
      p.c.push_back(parse_double("scenario.c0 c", trim(b)));
    }
    return p;
  }
  throw ConfigError(
      "scenario.c0 must be 'constant:<scale>' or 'file:<path>' (got '" + raw +
      "')");
}

std::string dirname_of(const std::string& path) {
  auto slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string() : path.substr(0, slash);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

constexpr const char* kTimeseriesHeader =
    "t,l,c_c,q_s,U,Z,V,w0,wx_l,bc_residual";

}  // namespace

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  const KeyValues kv = parse_sections(in, path);
  const Reader r{kv};

  Config cfg;
  r.get("bio.D", cfg.bio.D);
  r.get("bio.a", cfg.bio.a);
  r.get("bio.g", cfg.bio.g);
  r.get("bio.r_g", cfg.bio.r_g);
  r.get("bio.rtilde_g", cfg.bio.rtilde_g);
  r.get("bio.l_c", cfg.bio.l_c);
  r.get("bio.c_inf", cfg.bio.c_inf);

  r.get("control.gamma", cfg.control.gamma);
  r.get("control.k1", cfg.control.k1);
  r.get("control.k2", cfg.control.k2);
  r.get("control.q_s_const", cfg.control.q_s_const);
  if (auto it = kv.find("control.mode"); it != kv.end()) {
    cfg.control.mode = control_mode_from_string(it->second);
  }

  r.get("scenario.l_s", cfg.scenario.l_s);
  r.get("scenario.l_0", cfg.scenario.l_0);
  r.get("scenario.t_final", cfg.scenario.t_final);
  r.get("scenario.n_grid", cfg.scenario.n_grid);
  r.get("scenario.dt", cfg.scenario.dt);
  r.get("scenario.theta", cfg.scenario.theta);
  r.get("scenario.snapshot_every", cfg.scenario.snapshot_every);
  if (auto it = kv.find("scenario.c0"); it != kv.end()) {
    cfg.scenario.c0 = parse_c0(it->second, dirname_of(path));
  }

  r.get("output.timeseries", cfg.output.timeseries_path);
  r.get("output.snapshots", cfg.output.snapshot_path);
  r.get("output.plot_script", cfg.output.plot_script_path);

  // Reject unknown keys; silently ignoring a typo would apply a default
  // in its place.
  static const char* known[] = {
      "bio.D", "bio.a", "bio.g", "bio.r_g", "bio.rtilde_g", "bio.l_c",
      "bio.c_inf", "control.gamma", "control.k1", "control.k2",
      "control.q_s_const", "control.mode", "scenario.l_s", "scenario.l_0",
      "scenario.t_final", "scenario.n_grid", "scenario.dt", "scenario.theta",
      "scenario.snapshot_every", "scenario.c0", "output.timeseries",
      "output.snapshots", "output.plot_script"};
  for (const auto& [key, value] : kv) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError(path + ": unknown key '" + key + "'");
  }

  cfg.bio.validate();
  cfg.control.validate(cfg.bio);
  cfg.scenario.validate();
  return cfg;
}

void write_config(const Config& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << "[bio]\n";
  out << "D = " << fmt(cfg.bio.D) << "\n";
  out << "a = " << fmt(cfg.bio.a) << "\n";
  out << "g = " << fmt(cfg.bio.g) << "\n";
  out << "r_g = " << fmt(cfg.bio.r_g) << "\n";
  out << "rtilde_g = " << fmt(cfg.bio.rtilde_g) << "\n";
  out << "l_c = " << fmt(cfg.bio.l_c) << "\n";
  out << "c_inf = " << fmt(cfg.bio.c_inf) << "\n";
  out << "\n[control]\n";
  out << "gamma = " << fmt(cfg.control.gamma) << "\n";
  out << "k1 = " << fmt(cfg.control.k1) << "\n";
  out << "k2 = " << fmt(cfg.control.k2) << "\n";
  out << "mode = " << to_string(cfg.control.mode) << "\n";
  if (std::isfinite(cfg.control.q_s_const)) {
    out << "q_s_const = " << fmt(cfg.control.q_s_const) << "\n";
  }
  out << "\n[scenario]\n";
  out << "l_s = " << fmt(cfg.scenario.l_s) << "\n";
  out << "l_0 = " << fmt(cfg.scenario.l_0) << "\n";
  if (cfg.scenario.c0.kind == InitialProfile::Kind::constant_scale) {
    out << "c0 = constant:" << fmt(cfg.scenario.c0.scale) << "\n";
  } else {
    out << "c0 = file:" << cfg.scenario.c0.path << "\n";
  }
  out << "t_final = " << fmt(cfg.scenario.t_final) << "\n";
  out << "n_grid = " << cfg.scenario.n_grid << "\n";
  out << "dt = " << fmt(cfg.scenario.dt) << "\n";
  out << "theta = " << fmt(cfg.scenario.theta) << "\n";
  out << "snapshot_every = " << cfg.scenario.snapshot_every << "\n";
  out << "\n[output]\n";
  out << "timeseries = " << cfg.output.timeseries_path << "\n";
  out << "snapshots = " << cfg.output.snapshot_path << "\n";
  out << "plot_script = " << cfg.output.plot_script_path << "\n";
  if (!out) throw ConfigError("write failure on " + path);
}

void write_timeseries(std::span<const RunRecord> records,
                      const std::string& path) {
  if (records.empty()) {
    throw ConfigError("write_timeseries: no records to write");
  }
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw ConfigError("cannot open " + path + " for writing");
  std::fprintf(f, "%s\n", kTimeseriesHeader);
  for (const RunRecord& r : records) {
    std::fprintf(f,
                 "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                 "%.17g\n",
                 r.t, r.l, r.c_c, r.q_s, r.U, r.Z, r.V, r.w0, r.wx_l,
                 r.bc_residual);
  }
  const bool bad = std::ferror(f);
  std::fclose(f);
  if (bad) throw ConfigError("write failure on " + path);
}

std::vector<RunRecord> read_timeseries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kTimeseriesHeader) {
    throw ConfigError(path + ": missing or unexpected time-series header");
  }
  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    double v[10];
    std::istringstream row(line);
    std::string cell;
    for (int i = 0; i < 10; ++i) {
      if (!std::getline(row, cell, ',')) {
        throw ConfigError(path + ": short row '" + line + "'");
      }
      v[i] = parse_double("timeseries", trim(cell));
    }
    out.push_back(RunRecord{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7],
                            v[8], v[9]});
  }
  return out;
}

struct SnapshotWriter::Impl {
  std::ofstream out;
};

SnapshotWriter::SnapshotWriter(const std::string& path) : impl_(new Impl) {
  impl_->out.open(path);
  if (!impl_->out) {
    delete impl_;
    throw ConfigError("cannot open " + path + " for writing");
  }
  impl_->out << "t,sigma,x,c,u,w\n";
}

SnapshotWriter::~SnapshotWriter() { delete impl_; }

void SnapshotWriter::append(double t, double l, std::span<const double> sigma,
                            std::span<const double> c,
                            std::span<const double> u,
                            std::span<const double> w) {
  auto& out = impl_->out;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    out << fmt(t) << ',' << fmt(sigma[i]) << ',' << fmt(sigma[i] * l) << ','
        << fmt(c[i]) << ',' << fmt(u[i]) << ',' << fmt(w[i]) << '\n';
  }
  if (!out) throw ConfigError("write failure on snapshot file");
}

void write_plot_script(const std::string& path,
                       const std::string& timeseries_csv,
                       const std::string& snapshot_csv) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << "# gnuplot script generated by axonctl\n"
         "set datafile separator ','\n"
         "set key autotitle columnhead\n"
         "set terminal pngcairo size 1200,900\n"
         "set output 'axonctl_run.png'\n"
         "set multiplot layout 2,2\n"
         "set xlabel 't [s]'\n"
         "set ylabel 'l [um]'\n"
         "plot '"
      << timeseries_csv
      << "' using 1:($2*1e6) with lines title 'axon length'\n"
         "set ylabel 'c_c [mol/m^3]'\n"
         "plot '"
      << timeseries_csv
      << "' using 1:3 with lines title 'cone concentration'\n"
         "set ylabel 'flux [mol/m^4]'\n"
         "plot '"
      << timeseries_csv
      << "' using 1:4 with lines title 'q_s', '' using 1:5 with lines "
         "title 'U'\n"
         "set logscale y\n"
         "set ylabel 'norms'\n"
         "plot '"
      << timeseries_csv
      << "' using 1:6 with lines title 'Z', '' using 1:7 with lines "
         "title 'V'\n"
         "unset multiplot\n"
         "# Profile snapshots (last recorded time):\n"
         "set output 'axonctl_profile.png'\n"
         "unset logscale y\n"
         "set xlabel 'x [um]'\n"
         "set ylabel 'c [mol/m^3]'\n"
         "stats '"
      << snapshot_csv << "' using 1 nooutput\n"
      << "plot '" << snapshot_csv
      << "' using ($3*1e6):($1==STATS_max?$4:1/0) with lines title "
         "'c(x, t_final)'\n";
  if (!out) throw ConfigError("write failure on " + path);
}

}  // namespace axonctl
