// Copyright 2026 The rcl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rcl/cli/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace rcl::cli {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::config_invalid, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_file(const std::string& s) {
  std::error_code ec;
  return std::filesystem::is_regular_file(s, ec);
}

ComplexMatrix matrix_from_json(const json& j, Eigen::Index n, ErrorCode code) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n * n) {
    throw Error(code, "matrix must be a list of n*n [re, im] pairs");
  }
  ComplexMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const json& e = j[static_cast<std::size_t>(r * n + c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw Error(code, "matrix entries must be [re, im] pairs");
      }
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back({m(r, c).real(), m(r, c).imag()});
  }
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw Error(ErrorCode::config_invalid, "bad number: " + s);
  return v;
}

long to_long(const std::string& s) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw Error(ErrorCode::config_invalid, "bad integer: " + s);
  return v;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json parse_json(std::string_view text, ErrorCode code) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(code, std::string("JSON parse error: ") + e.what());
  }
}

}  // namespace

Channel parse_channel_json(std::string_view text) {
  const json j = parse_json(text, ErrorCode::invalid_channel);
  try {
    if (!j.is_object() || !j.contains("n") || !j.contains("kind") || !j.contains("branches")) {
      throw Error(ErrorCode::invalid_channel, "channel JSON needs n, kind and branches");
    }
    const auto n = j.at("n").get<Eigen::Index>();
    if (n < 1) throw Error(ErrorCode::invalid_channel, "channel dimension must be positive");
    const auto kind = j.at("kind").get<std::string>();
    const json& branches = j.at("branches");
    if (!branches.is_array() || branches.empty()) throw Error(ErrorCode::invalid_channel, "branches must be non-empty");
    if (kind == "mixed_unitary") {
      std::vector<UnitaryBranch> b;
      for (const auto& e : branches) {
        b.push_back({e.at("p").get<double>(), matrix_from_json(e.at("U"), n, ErrorCode::invalid_channel)});
      }
      return MixedUnitaryChannel(std::move(b));
    }
    if (kind == "nonlinear") {
      std::vector<PovmBranch> b;
      for (const auto& e : branches) {
        b.push_back({matrix_from_json(e.at("Q"), n, ErrorCode::invalid_channel),
                     matrix_from_json(e.at("U"), n, ErrorCode::invalid_channel)});
      }
      return NonlinearChannel(std::move(b));
    }
    if (kind == "kraus") {
      std::vector<ComplexMatrix> v;
      for (const auto& e : branches) v.push_back(matrix_from_json(e.at("V"), n, ErrorCode::invalid_channel));
      return KrausChannel(std::move(v));
    }
    throw Error(ErrorCode::invalid_channel, "unknown channel kind: " + kind);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_channel, std::string("malformed channel JSON: ") + e.what());
  } catch (const Error& e) {
    // Constructor failures (probabilities, unitarity, POVM) surface as channel errors.
    if (e.code() == ErrorCode::invalid_channel) throw;
    throw Error(ErrorCode::invalid_channel, std::string(error_code_name(e.code())) + ": " + e.what());
  }
}

std::string channel_to_json(const Channel& channel) {
  json j;
  j["n"] = channel_dim(channel);
  json branches = json::array();
  if (const auto* mu = std::get_if<MixedUnitaryChannel>(&channel)) {
    j["kind"] = "mixed_unitary";
    for (const auto& b : mu->branches()) branches.push_back({{"p", b.p}, {"U", matrix_to_json(b.u)}});
  } else if (const auto* nl = std::get_if<NonlinearChannel>(&channel)) {
    j["kind"] = "nonlinear";
    for (const auto& b : nl->branches()) {
      branches.push_back({{"Q", matrix_to_json(b.q)}, {"U", matrix_to_json(b.u)}});
    }
  } else {
    j["kind"] = "kraus";
    for (const auto& v : std::get<KrausChannel>(channel).kraus_ops()) branches.push_back({{"V", matrix_to_json(v)}});
  }
  j["branches"] = branches;
  return j.dump(2);
}

Channel load_channel(const std::string& source) {
  if (is_file(source)) return parse_channel_json(read_file(source));
  try {
    return named_channel(source);
  } catch (const Error& e) {
    throw Error(ErrorCode::invalid_channel, std::string("channel '") + source + "': " + e.what());
  }
}

PovmSet load_povm(const std::string& source, Eigen::Index n) {
  const json j = parse_json(is_file(source) ? read_file(source) : source, ErrorCode::invalid_povm);
  try {
    std::vector<ComplexMatrix> elements;
    for (const auto& e : j.at("elements")) elements.push_back(matrix_from_json(e, n, ErrorCode::invalid_povm));
    return PovmSet(std::move(elements));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_povm, std::string("malformed POVM JSON: ") + e.what());
  }
}

DensityMatrix parse_state(const std::string& spec, Eigen::Index n) {
  const std::vector<std::string> parts = split(spec, ':');
  const std::string& head = parts[0];
  if (head == "mixed" && parts.size() == 1) return DensityMatrix::maximally_mixed(n);
  if (head == "basis" && parts.size() == 2) {
    const long k = to_long(parts[1]);
    if (k < 0 || k >= n) throw Error(ErrorCode::config_invalid, "basis index out of range");
    return DensityMatrix::basis_projector(n, k);
  }
  if (head == "plus" && parts.size() == 1) {
    return DensityMatrix::pure(ComplexVector::Ones(n) / std::sqrt(static_cast<double>(n)));
  }
  if (head == "pure" && parts.size() == 2) {
    Rng rng(static_cast<std::uint64_t>(to_long(parts[1])));
    return random_pure_state(n, rng);
  }
  if (head == "hs" && parts.size() == 2) return random_density_hs(n, static_cast<std::uint64_t>(to_long(parts[1])));
  if (is_file(spec)) {
    const json j = parse_json(read_file(spec), ErrorCode::invalid_state);
    return DensityMatrix(matrix_from_json(j.contains("rho") ? j.at("rho") : j, n, ErrorCode::invalid_state));
  }
  throw Error(ErrorCode::config_invalid, "unknown state spec: " + spec);
}

namespace {

ComplexMatrix diag_matrix(const std::string& list, Eigen::Index n) {
  const std::vector<std::string> items = split(list, ',');
  if (static_cast<Eigen::Index>(items.size()) != n) throw Error(ErrorCode::config_invalid, "diag needs n entries");
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = to_double(items[static_cast<std::size_t>(i)]);
  return a;
}

ComplexMatrix pauli_matrix(const std::string& index, Eigen::Index n) {
  if (n != 2) throw Error(ErrorCode::config_invalid, "pauli observables need n = 2");
  const long k = to_long(index);
  if (k < 0 || k > 3) throw Error(ErrorCode::config_invalid, "pauli index must be 0..3");
  return pauli(static_cast<int>(k));
}

Observable observable_from_json(const json& j, Eigen::Index n) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "constant") return observables::constant(j.at("c").get<double>());
  if (kind == "trace") return observables::trace(n);
  if (kind == "purity") return observables::purity();
  if (kind == "linear") return observables::linear(matrix_from_json(j.at("A"), n, ErrorCode::config_invalid));
  if (kind == "frobenius_dist") {
    return observables::frobenius_dist(matrix_from_json(j.at("sigma"), n, ErrorCode::config_invalid));
  }
  if (kind == "exp_neg_dist") {
    return observables::exp_neg_dist(matrix_from_json(j.at("sigma"), n, ErrorCode::config_invalid),
                                     j.at("scale").get<double>());
  }
  if (kind == "exp_linear") {
    return observables::exp_linear(matrix_from_json(j.at("A"), n, ErrorCode::config_invalid), j.at("b").get<double>());
  }
  if (kind == "entry") {
    return observables::entry(j.at("i").get<Eigen::Index>(), j.at("j").get<Eigen::Index>(),
                              j.value("imaginary", false));
  }
  throw Error(ErrorCode::config_invalid, "unknown observable kind: " + kind);
}

}  // namespace

Observable parse_observable(const std::string& spec, Eigen::Index n) {
  if (is_file(spec)) {
    const json j = parse_json(read_file(spec), ErrorCode::config_invalid);
    try {
      return observable_from_json(j, n);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::config_invalid, std::string("malformed observable JSON: ") + e.what());
    }
  }
  const std::vector<std::string> p = split(spec, ':');
  const std::string& head = p[0];
  auto state_from = [&](std::size_t from) {
    if (p.size() <= from) return DensityMatrix::maximally_mixed(n).matrix();
    std::string rest = p[from];
    for (std::size_t i = from + 1; i < p.size(); ++i) rest += ":" + p[i];
    return parse_state(rest, n).matrix();
  };
  if (head == "constant" && p.size() == 2) return observables::constant(to_double(p[1]));
  if (head == "trace" && p.size() == 1) return observables::trace(n);
  if (head == "purity" && p.size() == 1) return observables::purity();
  if (head == "entry" && (p.size() == 3 || p.size() == 4)) {
    const long i = to_long(p[1]);
    const long j = to_long(p[2]);
    if (i < 0 || j < 0 || i >= n || j >= n) throw Error(ErrorCode::config_invalid, "entry index out of range");
    if (p.size() == 4 && p[3] != "im" && p[3] != "re") throw Error(ErrorCode::config_invalid, "entry part re|im");
    return observables::entry(i, j, p.size() == 4 && p[3] == "im");
  }
  if (head == "linear" && p.size() == 3 && p[1] == "pauli") return observables::linear(pauli_matrix(p[2], n));
  if (head == "linear" && p.size() == 3 && p[1] == "diag") return observables::linear(diag_matrix(p[2], n));
  if (head == "frobenius_dist") return observables::frobenius_dist(state_from(1));
  if (head == "exp_neg_dist" && p.size() >= 2) return observables::exp_neg_dist(state_from(2), to_double(p[1]));
  if (head == "exp_linear" && p.size() == 4 && p[1] == "pauli") {
    return observables::exp_linear(pauli_matrix(p[2], n), to_double(p[3]));
  }
  throw Error(ErrorCode::config_invalid, "unknown observable spec: " + spec);
}

void write_measure_csv(std::ostream& out, const EmpiricalMeasure& mu) {
  const Eigen::Index n = mu.dim();
  out << "atom_index,weight";
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) out << ",re" << r << c << ",im" << r << c;
  }
  out << '\n';
  std::size_t index = 0;
  for (const auto& a : mu.atoms()) {
    out << index++ << ',' << format_double(a.weight);
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) {
        out << ',' << format_double(a.state(r, c).real()) << ',' << format_double(a.state(r, c).imag());
      }
    }
    out << '\n';
  }
}

EmpiricalMeasure read_measure_csv(std::istream& in, Eigen::Index n) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::config_invalid, "measure CSV: missing header");
  if (static_cast<Eigen::Index>(split(line, ',').size()) != 2 + 2 * n * n) {
    throw Error(ErrorCode::dimension_mismatch, "measure CSV: header does not match dimension");
  }
  EmpiricalMeasure mu(n);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (static_cast<Eigen::Index>(f.size()) != 2 + 2 * n * n) {
      throw Error(ErrorCode::config_invalid, "measure CSV: wrong number of columns");
    }
    ComplexMatrix m(n, n);
    std::size_t col = 2;
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) {
        const double re = to_double(f[col++]);
        const double im = to_double(f[col++]);
        m(r, c) = Complex(re, im);
      }
    }
    mu.add(std::move(m), to_double(f[1]));
  }
  return mu;
}

}  // namespace rcl::cli
