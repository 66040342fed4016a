/*
Copyright 2026 the superchan authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "superchan/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace superchan {

/*******************************************************************************
 *
 * JSON formats
 *
 ******************************************************************************/

json matrix_to_json(const CMatrix &m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  std::vector<double> re, im;
  re.reserve(m.data().size());
  im.reserve(m.data().size());
  for (const complex_t &z : m.data()) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

CMatrix matrix_from_json(const json &j) {
  try {
    const std::size_t rows = j.at("rows").get<std::size_t>();
    const std::size_t cols = j.at("cols").get<std::size_t>();
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (re.size() != rows * cols || im.size() != rows * cols)
      throw data_error("matrix: re/im length must equal rows*cols");
    cvector_t entries(rows * cols);
    for (std::size_t k = 0; k < entries.size(); ++k)
      entries[k] = complex_t(re[k], im[k]);
    return CMatrix(rows, cols, std::move(entries));
  } catch (const json::exception &e) {
    throw data_error(std::string("matrix: malformed JSON: ") + e.what());
  }
}

json channel_to_json(const Channel &ch) {
  json j;
  j["dim_in"] = ch.dim_in;
  j["dim_out"] = ch.dim_out;
  j["choi"] = matrix_to_json(ch.choi);
  return j;
}

Channel channel_from_json(const json &j) {
  try {
    return Channel(matrix_from_json(j.at("choi")),
                   j.at("dim_in").get<std::size_t>(),
                   j.at("dim_out").get<std::size_t>());
  } catch (const json::exception &e) {
    throw data_error(std::string("channel: malformed JSON: ") + e.what());
  }
}

json superchannel_to_json(const Superchannel &m) {
  json j;
  j["d"] = m.d();
  j["choi"] = matrix_to_json(m.choi());
  j["slots"] = {"X1", "X2", "X3"};
  return j;
}

Superchannel superchannel_from_json(const json &j) {
  try {
    if (j.contains("slots") &&
        j.at("slots") != json({"X1", "X2", "X3"}))
      throw data_error("superchannel: unexpected slot layout");
    return Superchannel(matrix_from_json(j.at("choi")),
                        j.at("d").get<std::size_t>());
  } catch (const json::exception &e) {
    throw data_error(std::string("superchannel: malformed JSON: ") + e.what());
  }
}

json dataset_to_json(const CountDataset &ds) {
  json j;
  j["beta"] = ds.beta;
  j["K"] = ds.outcomes_k;
  j["exact"] = ds.exact;
  json states = json::array();
  for (StateLabel s : ds.frame_states)
    states.push_back(to_string(s));
  j["frame_states"] = states;
  json records = json::array();
  for (const CountRecord &r : ds.records) {
    json rec;
    rec["i"] = to_string(r.i);
    rec["j"] = to_string(r.j);
    rec["k"] = to_string(r.k);
    rec["n"] = r.n;
    if (r.trials_known)
      rec["N"] = r.trials;
    records.push_back(rec);
  }
  j["records"] = records;
  return j;
}

CountDataset dataset_from_json(const json &j) {
  try {
    CountDataset ds;
    ds.beta = j.value("beta", 0.1);
    ds.outcomes_k = j.value("K", std::size_t(4));
    ds.exact = j.value("exact", false);
    if (j.contains("frame_states")) {
      ds.frame_states.clear();
      for (const auto &s : j.at("frame_states"))
        ds.frame_states.push_back(state_from_string(s.get<std::string>()));
    }
    for (const auto &rec : j.at("records")) {
      CountRecord r;
      r.i = state_from_string(rec.at("i").get<std::string>());
      r.j = state_from_string(rec.at("j").get<std::string>());
      r.k = state_from_string(rec.at("k").get<std::string>());
      r.n = rec.at("n").get<double>();
      if (rec.contains("N")) {
        r.trials = rec.at("N").get<double>();
        r.trials_known = true;
      } else {
        r.trials_known = false;
      }
      ds.records.push_back(r);
    }
    return ds;
  } catch (const json::exception &e) {
    throw data_error(std::string("dataset: malformed JSON: ") + e.what());
  }
}

json reconstruction_to_json(const ReconstructionResult &r) {
  json j;
  j["superchannel"] = superchannel_to_json(r.superchannel);
  j["method"] =
      (r.method == ReconstructionMethod::Linear) ? "linear" : "mle";
  j["objective"] = r.objective;
  j["diagnostics"] = {
      {"min_eig_pre_projection", r.diagnostics.min_eig_pre_projection},
      {"iterations", r.diagnostics.iterations},
      {"kkt_residual", r.diagnostics.kkt_residual},
      {"converged", r.diagnostics.converged}};
  return j;
}

ExperimentSpec experiment_spec_from_json(const json &j) {
  try {
    ExperimentSpec spec;
    if (j.contains("tau") && j.contains("theta"))
      throw data_error("experiment spec: give either tau or theta, not both");
    if (j.contains("tau"))
      spec.theta = theta_for_tangle(j.at("tau").get<double>());
    if (j.contains("theta"))
      spec.theta = j.at("theta").get<double>();
    spec.state_purity_v = j.value("v", 1.0);
    if (j.contains("interaction"))
      spec.interaction =
          interaction_from_string(j.at("interaction").get<std::string>());
    if (j.contains("frame_states")) {
      spec.frame_states.clear();
      for (const auto &s : j.at("frame_states"))
        spec.frame_states.push_back(state_from_string(s.get<std::string>()));
    }
    spec.trials_per_config = j.value("n0", std::uint64_t(5000));
    spec.seed = j.value("seed", std::uint64_t(0));
    spec.exact = j.value("exact", false);
    spec.cz_control_on_h = j.value("cz_control_on_h", false);
    return spec;
  } catch (const json::exception &e) {
    throw data_error(std::string("experiment spec: malformed JSON: ") + e.what());
  }
}

json experiment_spec_to_json(const ExperimentSpec &spec) {
  json states = json::array();
  for (StateLabel s : spec.frame_states)
    states.push_back(to_string(s));
  return json{{"theta", spec.theta},
              {"v", spec.state_purity_v},
              {"interaction", to_string(spec.interaction)},
              {"frame_states", states},
              {"n0", spec.trials_per_config},
              {"seed", spec.seed},
              {"exact", spec.exact},
              {"cz_control_on_h", spec.cz_control_on_h}};
}

/*******************************************************************************
 *
 * CSV formats
 *
 ******************************************************************************/

static std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string dataset_to_csv(const CountDataset &ds) {
  std::string out = "i,j,k,n,N\n";
  for (const CountRecord &r : ds.records) {
    out += to_string(r.i) + "," + to_string(r.j) + "," + to_string(r.k) + "," +
           format_double(r.n) + ",";
    if (r.trials_known)
      out += format_double(r.trials);
    out += "\n";
  }
  return out;
}

CountDataset dataset_from_csv(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw data_error("dataset CSV: empty file");
  // tolerate trailing carriage returns
  auto strip = [](std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n'))
      s.pop_back();
    return s;
  };
  const std::string header = strip(line);
  const bool prob_format = header == "i,j,k,p";
  if (!prob_format && header != "i,j,k,n,N")
    throw data_error("dataset CSV: unexpected header '" + header + "'");

  CountDataset ds;
  ds.exact = prob_format;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty())
      continue;
    std::istringstream row(line);
    std::string field;
    CountRecord r;
    auto next = [&](const char *what) {
      if (!std::getline(row, field, ','))
        throw data_error(std::string("dataset CSV: missing field ") + what);
      return field;
    };
    r.i = state_from_string(next("i"));
    r.j = state_from_string(next("j"));
    r.k = state_from_string(next("k"));
    if (prob_format) {
      // exact probabilities: treat as counts out of one trial
      r.n = std::stod(next("p"));
      r.trials = 1.0;
      r.trials_known = true;
    } else {
      r.n = std::stod(next("n"));
      if (std::getline(row, field, ',') && !field.empty()) {
        r.trials = std::stod(field);
        r.trials_known = true;
      } else {
        r.trials_known = false;
      }
    }
    ds.records.push_back(r);
  }
  if (ds.records.empty())
    throw data_error("dataset CSV: no records");
  return ds;
}

std::string probabilities_to_csv(const CountDataset &ds, const rvector_t &p) {
  if (p.size() != ds.records.size())
    throw std::invalid_argument("probabilities_to_csv: size mismatch");
  std::string out = "i,j,k,p\n";
  for (std::size_t r = 0; r < p.size(); ++r) {
    const CountRecord &rec = ds.records[r];
    out += to_string(rec.i) + "," + to_string(rec.j) + "," + to_string(rec.k) +
           "," + format_double(p[r]) + "\n";
  }
  return out;
}

std::string surface_to_csv(const std::vector<PrepSurfacePoint> &surface) {
  std::string out = "theta,phi,f\n";
  for (const PrepSurfacePoint &pt : surface) {
    out += format_double(pt.theta) + "," + format_double(pt.phi) + ",";
    out += pt.skipped ? "nan" : format_double(pt.f);
    out += "\n";
  }
  return out;
}

std::string sweep_to_csv(const std::vector<SweepRow> &rows) {
  std::string out = "tau,target,ic_norm\n";
  for (const SweepRow &r : rows)
    out += format_double(r.tau) + "," + to_string(r.target) + "," +
           format_double(r.ic_norm) + "\n";
  return out;
}

/*******************************************************************************
 *
 * File helpers
 *
 ******************************************************************************/

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw data_error("cannot open file for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string &path, const std::string &contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw data_error("cannot open file for writing: " + path);
  out << contents;
  if (!out)
    throw data_error("write failed: " + path);
}

json read_json(const std::string &path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception &e) {
    throw data_error("malformed JSON in " + path + ": " + e.what());
  }
}

void write_json(const std::string &path, const json &j) {
  write_file(path, j.dump(2) + "\n");
}

/*******************************************************************************
 *
 * Console view
 *
 ******************************************************************************/

CMatrix to_polarization_pauli_basis(const Superchannel &m) {
  const std::size_t d = m.d();
  if (d != 2)
    throw std::invalid_argument("to_polarization_pauli_basis: qubits only");
  const CMatrix sx(2, 2, {0.0, 1.0, 1.0, 0.0});
  const CMatrix sy(2, 2, {0.0, complex_t(0.0, -1.0), complex_t(0.0, 1.0), 0.0});
  const CMatrix sz(2, 2, {1.0, 0.0, 0.0, -1.0});
  const std::vector<CMatrix> paulis = {CMatrix::identity(2), sx, sy, sz};
  // Columns are the vectorized normalized Paulis on the X2 (x) X3 pair.
  CMatrix t(4, 4);
  for (std::size_t mu = 0; mu < 4; ++mu) {
    const CMatrix v = vectorize(paulis[mu]);
    for (std::size_t r = 0; r < 4; ++r)
      t(r, mu) = v(r, 0) / std::sqrt(2.0);
  }
  const CMatrix u = kron(CMatrix::identity(2), t);
  return u.adjoint() * m.choi() * u;
}

std::string format_matrix(const CMatrix &m, int precision) {
  std::ostringstream out;
  out.precision(precision);
  out << std::fixed;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const complex_t z = m(i, j);
      out << (j ? "  " : "") << std::showpos << z.real() << std::noshowpos
          << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    }
    out << "\n";
  }
  return out.str();
}

} // namespace superchan
