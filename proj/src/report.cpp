#include "trihyp/report.hpp"

#include <fstream>
#include <cmath>
#include <sstream>

#include "trihyp/errors.hpp"

namespace trihyp {

std::uint64_t config_hash(const json& j) {
  std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash_hex(const json& j) {
  std::ostringstream os;
  os << std::hex << config_hash(j);
  return os.str();
}

namespace {

CoefficientField field_from(const json& j, const char* key, int degree) {
  if (!j.contains(key)) return CoefficientField::zero(degree);
  if (!j[key].is_string()) throw InputError(std::string(key) + " must be an expression string");
  try {
    return CoefficientField::parse(j[key].get<std::string>(), degree);
  } catch (const ParseError& e) {
    throw InputError(std::string("bad expression for ") + key + ": " + e.what());
  }
}

}  // namespace

OperatorModel load_operator(const json& j) {
  OperatorModel m;
  m.q1 = field_from(j, "q1", 1);
  m.q2 = field_from(j, "q2", 2);
  m.q3 = field_from(j, "q3", 3);
  m.p2_re = field_from(j, "p2_re", 2);
  m.p2_im = field_from(j, "p2_im", 2);
  if (j.contains("domain")) {
    const auto& d = j["domain"];
    if (d.contains("T")) m.domain.T = d["T"].get<double>();
    if (d.contains("X")) {
      m.domain.x_lo = d["X"][0].get<double>();
      m.domain.x_hi = d["X"][1].get<double>();
    }
    if (!(m.domain.T > 0.0) || !(m.domain.x_hi > m.domain.x_lo))
      throw InputError("invalid domain box");
  }
  // coefficients must stay finite over the domain box (catches poles, e.g. 1/x)
  const CoefficientField* fields[] = {&m.q1, &m.q2, &m.q3, &m.p2_re, &m.p2_im};
  const char* names[] = {"q1", "q2", "q3", "p2_re", "p2_im"};
  for (int f = 0; f < 5; ++f) {
    for (int i = 0; i <= 8; ++i) {
      double t = m.domain.T * i / 8;
      for (int k = 0; k <= 8; ++k) {
        double x = m.domain.x_lo + (m.domain.x_hi - m.domain.x_lo) * k / 8;
        for (double xi : {-1.0, 1.0})
          if (!std::isfinite((*fields[f])(t, x, xi)))
            throw InputError(std::string(names[f]) + " is not finite on the domain box");
      }
    }
  }
  return m;
}

namespace {

// xi-polynomial tabulation on a (t,x) grid for fields without source text.
json tabulate_field(const CoefficientField& f, const DomainBox& box) {
  const int nt = 24, nx = 24;
  if (!(box.T > 0.0)) throw InputError("cannot tabulate a field on an empty time window");
  json tab;
  tab["type"] = "table";
  tab["degree"] = f.degree();
  tab["T"] = box.T;
  tab["x_lo"] = box.x_lo;
  tab["x_hi"] = box.x_hi;
  tab["nt"] = nt;
  tab["nx"] = nx;
  // coefficients of xi^d recovered from values at nodes {0,1,-1,2,-2}
  std::vector<double> flat;
  flat.reserve((nt + 1) * (nx + 1) * 5);
  for (int i = 0; i <= nt; ++i) {
    double t = box.T * i / nt;
    for (int jx = 0; jx <= nx; ++jx) {
      double x = box.x_lo + (box.x_hi - box.x_lo) * jx / nx;
      double y0 = f(t, x, 0.0), y1 = f(t, x, 1.0), y2 = f(t, x, -1.0),
             y3 = f(t, x, 2.0), y4 = f(t, x, -2.0);
      double c0 = y0;
      double c1 = (2.0 / 3) * (y1 - y2) - (1.0 / 12) * (y3 - y4);
      double c2 = (2.0 / 3) * (y1 + y2) - (1.0 / 24) * (y3 + y4) - 1.25 * y0;
      double c3 = (1.0 / 12) * (y3 - y4) - (1.0 / 6) * (y1 - y2);
      double c4 = (1.0 / 24) * (y3 + y4) - (1.0 / 6) * (y1 + y2) + 0.25 * y0;
      for (double c : {c0, c1, c2, c3, c4}) flat.push_back(c);
    }
  }
  tab["coeff"] = flat;
  return tab;
}

CoefficientField field_from_table(const json& tab) {
  int nt = tab["nt"].get<int>(), nx = tab["nx"].get<int>();
  double T = tab["T"].get<double>();
  double x_lo = tab["x_lo"].get<double>(), x_hi = tab["x_hi"].get<double>();
  auto flat = tab["coeff"].get<std::vector<double>>();
  int degree = tab["degree"].get<int>();
  auto eval = [nt, nx, T, x_lo, x_hi, flat](double t, double x, double xi) {
    double ti = std::clamp(t / T * nt, 0.0, double(nt));
    double xj = std::clamp((x - x_lo) / (x_hi - x_lo) * nx, 0.0, double(nx));
    int i0 = std::min(int(ti), nt - 1), j0 = std::min(int(xj), nx - 1);
    double ft = ti - i0, fx = xj - j0;
    double c[5];
    for (int d = 0; d < 5; ++d) {
      auto at = [&](int i, int j) { return flat[(size_t(i) * (nx + 1) + j) * 5 + d]; };
      c[d] = (1 - ft) * (1 - fx) * at(i0, j0) + (1 - ft) * fx * at(i0, j0 + 1) +
             ft * (1 - fx) * at(i0 + 1, j0) + ft * fx * at(i0 + 1, j0 + 1);
    }
    return (((c[4] * xi + c[3]) * xi + c[2]) * xi + c[1]) * xi + c[0];
  };
  return CoefficientField(eval, degree);
}

json field_to_json(const CoefficientField& f, const DomainBox& box) {
  if (f.has_analytic_partials()) {
    json j;
    j["type"] = "expr";
    j["degree"] = f.degree();
    j["src"] = f.expr().str();
    return j;
  }
  return tabulate_field(f, box);
}

CoefficientField field_from_json(const json& j) {
  if (j["type"] == "expr")
    return CoefficientField::parse(j["src"].get<std::string>(), j["degree"].get<int>());
  return field_from_table(j);
}

}  // namespace

json reduced_to_json(const ReducedOperator& r, const DomainBox& box) {
  json j;
  j["a2"] = field_to_json(r.a2, box);
  j["alpha"] = field_to_json(r.alpha, box);
  j["b3"] = field_to_json(r.b3, box);
  j["b2_re"] = field_to_json(r.b2_re, box);
  j["b2_im"] = field_to_json(r.b2_im, box);
  j["b1"] = field_to_json(r.b1, box);
  j["b0"] = field_to_json(r.b0, box);
  j["c1"] = field_to_json(r.c1, box);
  j["c0"] = field_to_json(r.c0, box);
  j["d0"] = field_to_json(r.d0, box);
  j["eps"] = r.eps;
  j["delta_ellipticity"] = r.delta_ellipticity;
  j["provenance"] = r.provenance;
  return j;
}

ReducedOperator reduced_from_json(const json& j) {
  ReducedOperator r;
  r.a2 = field_from_json(j["a2"]);
  r.alpha = field_from_json(j["alpha"]);
  r.b3 = field_from_json(j["b3"]);
  r.b2_re = field_from_json(j["b2_re"]);
  r.b2_im = field_from_json(j["b2_im"]);
  r.b1 = field_from_json(j["b1"]);
  r.b0 = field_from_json(j["b0"]);
  r.c1 = field_from_json(j["c1"]);
  r.c0 = field_from_json(j["c0"]);
  r.d0 = field_from_json(j["d0"]);
  r.eps = j["eps"].get<double>();
  r.delta_ellipticity = j["delta_ellipticity"].get<double>();
  r.provenance = j["provenance"].get<std::string>();
  return r;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path + " for writing");
  for (size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "\n");
  out.precision(17);
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "\n");
  }
}

void write_csv_mixed(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path + " for writing");
  for (size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "\n");
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "\n");
  }
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path + " for writing");
  out << content;
}

}  // namespace trihyp
