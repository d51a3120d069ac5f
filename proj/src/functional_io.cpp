#include "monobell/functional_io.hpp"

#include <fstream>

namespace monobell {

namespace {

std::vector<int> per_party(const Json& j, std::size_t parties, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("scenario: missing '") + key + "'");
  const Json& v = j.at(key);
  if (v.is_number_integer()) return std::vector<int>(parties, v.get<int>());
  auto out = v.get<std::vector<int>>();
  if (out.size() != parties) throw ConfigError(std::string("scenario: '") + key + "' length != parties");
  return out;
}

std::vector<int> term_inputs(const Json& j) {
  std::vector<int> out;
  for (const auto& v : j) out.push_back(v.is_null() ? CorrelatorFunctional::kAbsent : v.get<int>());
  return out;
}

}  // namespace

Json to_json(const Scenario& s) {
  return Json{{"parties", s.parties()}, {"inputs", s.inputs}, {"outputs", s.outputs}};
}

Json to_json(const CorrelatorFunctional& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms()) {
    Json inputs = Json::array();
    for (int x : t.inputs) inputs.push_back(x == CorrelatorFunctional::kAbsent ? Json(nullptr) : Json(x));
    terms.push_back({{"inputs", inputs}, {"coeff", t.coeff}});
  }
  Json j{{"scenario", to_json(f.scenario())}, {"correlator_terms", terms}};
  if (f.declared_bound) j["declared_bound"] = *f.declared_bound;
  return j;
}

Json to_json(const BellFunctional& f) {
  const Scenario& sc = f.scenario();
  Json terms = Json::array();
  for (std::size_t i = 0; i < sc.input_tuples(); ++i)
    for (std::size_t o = 0; o < sc.output_tuples(); ++o)
      if (const double c = f.coefficient(i, o); c != 0.0)
        terms.push_back({{"inputs", sc.decode_inputs(i)}, {"outputs", sc.decode_outputs(o)}, {"coeff", c}});
  Json j{{"scenario", to_json(sc)}, {"probability_terms", terms}};
  if (f.declared_bound) j["declared_bound"] = *f.declared_bound;
  return j;
}

Scenario scenario_from_json(const Json& j) {
  try {
    const auto parties = j.at("parties").get<std::size_t>();
    return Scenario(per_party(j, parties, "inputs"), per_party(j, parties, "outputs"));
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

CorrelatorFunctional correlator_from_json(const Json& j) {
  try {
    CorrelatorFunctional f(scenario_from_json(j.at("scenario")));
    for (const auto& t : j.at("correlator_terms")) f.add_term(term_inputs(t.at("inputs")), t.at("coeff").get<double>());
    if (j.contains("declared_bound") && !j["declared_bound"].is_null())
      f.declared_bound = j["declared_bound"].get<double>();
    return f;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("functional: ") + e.what());
  }
}

FunctionalDocument functional_from_json(const Json& j) {
  if (j.contains("correlator_terms")) {
    auto c = correlator_from_json(j);
    auto p = to_probability_form(c);
    return {std::move(c), std::move(p)};
  }
  try {
    BellFunctional f(scenario_from_json(j.at("scenario")));
    for (const auto& t : j.at("probability_terms"))
      f.add_term(t.at("inputs").get<std::vector<int>>(), t.at("outputs").get<std::vector<int>>(),
                 t.at("coeff").get<double>());
    if (j.contains("declared_bound") && !j["declared_bound"].is_null())
      f.declared_bound = j["declared_bound"].get<double>();
    return {std::nullopt, std::move(f)};
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("functional: ") + e.what());
  }
}

Json to_json(const ComplexMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json rr = Json::array(), ii = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ii.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return Json{{"re", re}, {"im", im}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  try {
    const auto re = j.at("re").get<std::vector<std::vector<double>>>();
    std::vector<std::vector<double>> im;
    if (j.contains("im")) im = j.at("im").get<std::vector<std::vector<double>>>();
    const std::size_t rows = re.size();
    const std::size_t cols = rows == 0 ? 0 : re.front().size();
    ComplexMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      if (re[r].size() != cols || (!im.empty() && (im.size() != rows || im[r].size() != cols)))
        throw ConfigError("matrix: ragged re/im arrays");
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = Complex(re[r][c], im.empty() ? 0.0 : im[r][c]);
    }
    return m;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("matrix: ") + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace monobell
