#include "nhb/io.hpp"

#include <json.hpp>

#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace nhb::io {

namespace {

void check_axis(const GridAxisSpec& ax) {
  require(ax.n >= 2, ErrorKind::GridMismatch,
          "axis '" + ax.name + "' needs >= 2 samples");
  require(ax.max > ax.min, ErrorKind::GridMismatch,
          "axis '" + ax.name + "' needs max > min");
}

}  // namespace

NhGridFile read_nhgrid(std::istream& in) {
  std::string magic, version;
  NhGridFile g;
  if (!(in >> magic >> version)) throw Error(ErrorKind::FormatError, "empty input");
  require(magic == "NHGRID" && version == "v1", ErrorKind::FormatError,
          "expected 'NHGRID v1' header, got '" + magic + " " + version + "'");
  if (!(in >> g.dim)) throw Error(ErrorKind::FormatError, "missing dimension");
  require(g.dim >= 1, ErrorKind::NonSquare, "matrix dimension must be >= 1");
  for (GridAxisSpec* ax : {&g.ax0, &g.ax1}) {
    if (!(in >> ax->name >> ax->n >> ax->min >> ax->max))
      throw Error(ErrorKind::FormatError, "malformed axis header");
    check_axis(*ax);
  }

  const long n_points = static_cast<long>(g.ax0.n) * g.ax1.n;
  g.samples.reserve(n_points);
  for (long p = 0; p < n_points; ++p) {
    cxmat m(g.dim, g.dim);
    for (int i = 0; i < g.dim; ++i) {
      for (int j = 0; j < g.dim; ++j) {
        double re, im;
        if (!(in >> re >> im))
          throw Error(ErrorKind::FormatError,
                      "truncated sample data at point " + std::to_string(p));
        m(i, j) = cxd(re, im);
      }
    }
    g.samples.push_back(std::move(m));
  }
  double extra;
  require(!(in >> extra), ErrorKind::GridMismatch,
          "trailing data beyond the declared grid");
  return g;
}

NhGridFile read_nhgrid_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::FormatError, "cannot open '" + path + "'");
  return read_nhgrid(in);
}

void write_nhgrid(std::ostream& out, const NhGridFile& g) {
  out << "NHGRID v1 " << g.dim << ' ' << g.ax0.name << ' ' << g.ax0.n << ' '
      << std::setprecision(17) << g.ax0.min << ' ' << g.ax0.max << ' '
      << g.ax1.name << ' ' << g.ax1.n << ' ' << g.ax1.min << ' ' << g.ax1.max
      << '\n';
  for (const auto& m : g.samples) {
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j)
        out << m(i, j).real() << ' ' << m(i, j).imag() << ' ';
      out << '\n';
    }
  }
}

void write_nhgrid_file(const std::string& path, const NhGridFile& g) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::FormatError, "cannot write '" + path + "'");
  write_nhgrid(out, g);
}

models::HamiltonianField external_model(const NhGridFile& g) {
  require(static_cast<long>(g.samples.size()) ==
              static_cast<long>(g.ax0.n) * g.ax1.n,
          ErrorKind::GridMismatch, "sample count does not match axis sizes");
  for (const auto& m : g.samples)
    require(m.rows() == g.dim && m.cols() == g.dim, ErrorKind::NonSquare,
            "sample dimension mismatch");

  const double h0 = (g.ax0.max - g.ax0.min) / (g.ax0.n - 1);
  const double h1 = (g.ax1.max - g.ax1.min) / (g.ax1.n - 1);

  models::HamiltonianField f;
  f.spec.name = "external";
  f.spec.param_names = {g.ax0.name, g.ax1.name};
  f.spec.dim = g.dim;
  f.preferred_step = 0.5 * std::min(h0, h1);
  f.h = [g, h0, h1](const Point& p) {
    const double eps = 1e-9;
    require(p[0] >= g.ax0.min - eps && p[0] <= g.ax0.max + eps &&
                p[1] >= g.ax1.min - eps && p[1] <= g.ax1.max + eps,
            ErrorKind::EvaluationFailure, "point outside the sampled region");
    const double u = std::clamp((p[0] - g.ax0.min) / h0, 0.0, g.ax0.n - 1.0);
    const double v = std::clamp((p[1] - g.ax1.min) / h1, 0.0, g.ax1.n - 1.0);
    const int i = std::min(static_cast<int>(u), g.ax0.n - 2);
    const int j = std::min(static_cast<int>(v), g.ax1.n - 2);
    const double a = u - i;
    const double b = v - j;
    auto at = [&g](int ii, int jj) -> const cxmat& {
      return g.samples[static_cast<size_t>(ii) * g.ax1.n + jj];
    };
    return cxmat((1 - a) * (1 - b) * at(i, j) + a * (1 - b) * at(i + 1, j) +
                 (1 - a) * b * at(i, j + 1) + a * b * at(i + 1, j + 1));
  };
  return f;
}

NhGridFile sample_model(const models::HamiltonianField& field,
                        const GridAxisSpec& ax0, const GridAxisSpec& ax1) {
  require(field.n_axes() == 2, ErrorKind::ValidationError,
          "exchange grids are 2-axis");
  check_axis(ax0);
  check_axis(ax1);
  NhGridFile g;
  g.dim = field.spec.dim;
  g.ax0 = ax0;
  g.ax1 = ax1;
  g.samples.reserve(static_cast<size_t>(ax0.n) * ax1.n);
  for (int i = 0; i < ax0.n; ++i) {
    const double x0 = ax0.min + (ax0.max - ax0.min) * i / (ax0.n - 1);
    for (int j = 0; j < ax1.n; ++j) {
      const double x1 = ax1.min + (ax1.max - ax1.min) * j / (ax1.n - 1);
      g.samples.push_back(field.h({x0, x1}));
    }
  }
  return g;
}

namespace {

using nlohmann::json;

json cx_to_json(const cxd& z) { return json::array({z.real(), z.imag()}); }

json mat_to_json(const cxmat& m) {
  json data = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) data.push_back(cx_to_json(m(i, j)));
  return json{{"shape", {m.rows(), m.cols()}}, {"data", data}};
}

json record_to_json(const OutputRecord& rec,
                    const std::vector<std::string>& axis_names,
                    const std::string& config_hash) {
  json point = json::object();
  for (size_t k = 0; k < rec.p.size() && k < axis_names.size(); ++k)
    point[axis_names[k]] = rec.p[k];
  json quantities = json::object();
  for (const auto& [k, v] : rec.matrices) quantities[k] = mat_to_json(v);
  for (const auto& [k, v] : rec.complexes) quantities[k] = cx_to_json(v);
  for (const auto& [k, v] : rec.reals) quantities[k] = v;
  for (const auto& [k, v] : rec.texts) quantities[k] = v;
  return json{{"point", point},
              {"quantities", quantities},
              {"config_hash", config_hash}};
}

}  // namespace

void write_records_json(std::ostream& out, const std::string& config_hash,
                        const std::vector<std::string>& axis_names,
                        const std::vector<OutputRecord>& records,
                        bool with_timestamp) {
  json root;
  root["config_hash"] = config_hash;
  root["version"] = kVersion;
  if (with_timestamp) {
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    root["generated_utc"] = buf;
  }
  json recs = json::array();
  for (const auto& r : records)
    recs.push_back(record_to_json(r, axis_names, config_hash));
  root["records"] = std::move(recs);
  out << root.dump(2) << '\n';
}

void write_records_csv(std::ostream& out,
                       const std::vector<std::string>& axis_names,
                       const std::vector<OutputRecord>& records) {
  if (records.empty()) return;
  const auto& first = records.front();

  out << std::setprecision(17);
  bool lead = true;
  auto sep = [&]() {
    if (!lead) out << ',';
    lead = false;
  };
  for (const auto& a : axis_names) {
    sep();
    out << a;
  }
  for (const auto& [k, m] : first.matrices)
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) {
        sep();
        out << k << '.' << i << '.' << j << ".re";
        out << ',' << k << '.' << i << '.' << j << ".im";
      }
  for (const auto& [k, v] : first.complexes) {
    (void)v;
    sep();
    out << k << ".re," << k << ".im";
  }
  for (const auto& [k, v] : first.reals) {
    (void)v;
    sep();
    out << k;
  }
  out << '\n';

  for (const auto& r : records) {
    lead = true;
    for (size_t a = 0; a < axis_names.size(); ++a) {
      sep();
      out << (a < r.p.size() ? r.p[a] : 0.0);
    }
    for (const auto& [k, m] : r.matrices) {
      (void)k;
      for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
          sep();
          out << m(i, j).real() << ',' << m(i, j).imag();
        }
    }
    for (const auto& [k, v] : r.complexes) {
      (void)k;
      sep();
      out << v.real() << ',' << v.imag();
    }
    for (const auto& [k, v] : r.reals) {
      (void)k;
      sep();
      out << v;
    }
    out << '\n';
  }
}

}  // namespace nhb::io
