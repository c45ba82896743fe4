#include "fracspec/export.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "fracspec/errors.hpp"
#include "json.hpp"

namespace fracspec::io {

using json = nlohmann::ordered_json;

namespace {

const Eigenpair& pair_with_vector(const Spectrum& spectrum, std::size_t index) {
  if (index < 1 || index > spectrum.pairs.size())
    throw DomainError("eigenfunction index " + std::to_string(index) + " outside 1.." +
                      std::to_string(spectrum.pairs.size()));
  const Eigenpair& p = spectrum.pairs[index - 1];
  if (p.vector.empty()) throw DomainError("eigenfunction " + std::to_string(index) + " was not computed");
  return p;
}

// Nodal values with the Dirichlet endpoints added back.
std::vector<Complex> full_trace(const Eigenpair& p) {
  std::vector<Complex> u(p.vector.size() + 2);
  std::copy(p.vector.begin(), p.vector.end(), u.begin() + 1);
  return u;
}

double node(const MeshSummary& mesh, std::size_t j) {
  if (static_cast<int>(j) == mesh.elements) return mesh.b;
  return mesh.a + static_cast<double>(j) * (mesh.b - mesh.a) / mesh.elements;
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw ConfigError("unknown format '" + name + "' (expected csv or json)");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_spectrum(std::ostream& os, const Spectrum& spectrum, const SpectrumReport& report, Format format) {
  if (format == Format::Csv) {
    os << "index,re_lambda,im_lambda,residual,is_real,region,cone_margin\n";
    for (std::size_t i = 0; i < spectrum.pairs.size(); ++i) {
      const auto& p = spectrum.pairs[i];
      os << i + 1 << ',' << format_double(p.value.real()) << ',' << format_double(p.value.imag()) << ','
         << format_double(p.residual) << ',' << (report.is_real[i] ? 1 : 0) << ',' << region_name(report.regions[i])
         << ',' << format_double(report.margins[i]) << '\n';
    }
    return;
  }
  json pairs = json::array();
  for (std::size_t i = 0; i < spectrum.pairs.size(); ++i) {
    const auto& p = spectrum.pairs[i];
    pairs.push_back({{"index", i + 1},
                     {"re_lambda", p.value.real()},
                     {"im_lambda", p.value.imag()},
                     {"residual", p.residual},
                     {"is_real", static_cast<bool>(report.is_real[i])},
                     {"region", region_name(report.regions[i])},
                     {"cone_margin", report.margins[i]}});
  }
  json doc;
  if (spectrum.orders) {
    doc["alpha"] = spectrum.orders->alpha();
    doc["beta"] = spectrum.orders->beta();
  }
  doc["a"] = spectrum.mesh.a;
  doc["b"] = spectrum.mesh.b;
  doc["n"] = spectrum.mesh.elements;
  doc["eigenpairs"] = std::move(pairs);
  os << doc.dump(2) << '\n';
}

void write_report(std::ostream& os, const Spectrum& spectrum, const SpectrumReport& report) {
  double worst = 0.0;
  std::size_t with_vectors = 0, unconverged = 0;
  for (const auto& p : spectrum.pairs) {
    if (p.vector.empty()) continue;
    ++with_vectors;
    if (!p.converged) ++unconverged;
    worst = std::max(worst, p.residual);
  }
  json doc;
  if (spectrum.orders) {
    doc["alpha"] = spectrum.orders->alpha();
    doc["beta"] = spectrum.orders->beta();
    doc["cone_half_angle"] = spectrum.orders->cone_half_angle();
  }
  doc["a"] = spectrum.mesh.a;
  doc["b"] = spectrum.mesh.b;
  doc["n"] = spectrum.mesh.elements;
  doc["eigenvalue_count"] = spectrum.pairs.size();
  doc["real_count"] = report.real_count;
  doc["complex_pair_count"] = report.pair_count;
  doc["cone_margin"] = report.cone_margin;
  doc["principal"] = {{"re_lambda", report.principal_value.real()},
                      {"im_lambda", report.principal_value.imag()},
                      {"positive", report.principal_positive}};
  doc["vectors_computed"] = with_vectors;
  doc["vectors_unconverged"] = unconverged;
  doc["max_residual"] = with_vectors ? worst : std::nan("");
  os << doc.dump(2) << '\n';
}

void write_eigenfunction(std::ostream& os, const Spectrum& spectrum, std::size_t index, Format format) {
  const auto u = full_trace(pair_with_vector(spectrum, index));
  if (format == Format::Csv) {
    os << "x,re_u,im_u,abs_u\n";
    for (std::size_t j = 0; j < u.size(); ++j)
      os << format_double(node(spectrum.mesh, j)) << ',' << format_double(u[j].real()) << ','
         << format_double(u[j].imag()) << ',' << format_double(std::abs(u[j])) << '\n';
    return;
  }
  json x = json::array(), re = json::array(), im = json::array(), mag = json::array();
  for (std::size_t j = 0; j < u.size(); ++j) {
    x.push_back(node(spectrum.mesh, j));
    re.push_back(u[j].real());
    im.push_back(u[j].imag());
    mag.push_back(std::abs(u[j]));
  }
  const auto& p = spectrum.pairs[index - 1];
  json doc{{"index", index}, {"re_lambda", p.value.real()}, {"im_lambda", p.value.imag()},
           {"x", x},         {"re_u", re},                  {"im_u", im},
           {"abs_u", mag}};
  os << doc.dump(2) << '\n';
}

void write_vectors(std::ostream& os, const Spectrum& spectrum, std::size_t count) {
  std::vector<std::vector<Complex>> traces;
  for (std::size_t j = 1; j <= count; ++j) traces.push_back(full_trace(pair_with_vector(spectrum, j)));
  os << 'x';
  for (std::size_t j = 1; j <= count; ++j) os << ",re_u" << j << ",im_u" << j;
  os << '\n';
  const std::size_t nodes = static_cast<std::size_t>(spectrum.mesh.elements) + 1;
  for (std::size_t i = 0; i < nodes; ++i) {
    os << format_double(node(spectrum.mesh, i));
    for (const auto& t : traces) os << ',' << format_double(t[i].real()) << ',' << format_double(t[i].imag());
    os << '\n';
  }
}

std::string sibling_path(const std::string& path, const std::string& suffix, const std::string& extension) {
  std::filesystem::path p(path);
  const std::string ext = extension.empty() ? p.extension().string() : extension;
  return (p.parent_path() / (p.stem().string() + suffix + ext)).string();
}

std::string indexed_path(const std::string& path, std::size_t index) {
  return sibling_path(path, "_j" + std::to_string(index), "");
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace fracspec::io
