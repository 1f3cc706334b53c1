#include "logicut/instance_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <utility>

#include "logicut/oracles/bqp.hpp"
#include "logicut/oracles/erm.hpp"
#include "logicut/oracles/facility.hpp"
#include "logicut/oracles/netdesign.hpp"
#include "logicut/oracles/portfolio.hpp"
#include "logicut/oracles/unit_commitment.hpp"

namespace logicut {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& location, const std::string& message) {
  throw ParseError(location, message);
}

int line_of_offset(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

// nlohmann prefixes messages with "[json.exception...] "; strip that and the
// redundant position clause, the location string already carries the line.
std::string strip_exception_prefix(const std::string& message) {
  std::size_t bracket = message.find("] ");
  std::string rest = bracket == std::string::npos ? message : message.substr(bracket + 2);
  std::size_t colon = rest.find(": ");
  if (rest.rfind("parse error", 0) == 0 && colon != std::string::npos)
    rest = rest.substr(colon + 2);
  return rest;
}

// --- located JSON field access ---

const json& require(const json& obj, const std::string& path, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, "missing field \"" + key + "\"");
  return *it;
}

const json* optional_field(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void check_known_keys(const json& obj, const std::string& path,
                      const std::vector<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      fail(path + "." + it.key(), "unknown field");
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Eigen::VectorXd get_vector(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = get_number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Eigen::VectorXd get_sized_vector(const json& j, const std::string& path, Eigen::Index size,
                                 const std::string& size_means) {
  Eigen::VectorXd v = get_vector(j, path);
  if (v.size() != size)
    fail(path, "expected " + std::to_string(size) + " entries (" + size_means + "), got " +
                   std::to_string(v.size()));
  return v;
}

Eigen::MatrixXd get_matrix(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of number rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  if (rows > 0) {
    if (!j[0].is_array()) fail(path + "[0]", "expected an array of numbers");
    cols = j[0].size();
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array()) fail(row_path, "expected an array of numbers");
    if (j[r].size() != cols)
      fail(row_path, "row length mismatch: expected " + std::to_string(cols) + " entries, got " +
                         std::to_string(j[r].size()));
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          get_number(j[r][c], row_path + "[" + std::to_string(c) + "]");
  }
  return m;
}

// --- blocks shared by every family ---

FeasibleSet build_feasible_set(const json* block, int n) {
  std::vector<int> lower(n, 0);
  std::vector<int> upper(n, 1);
  std::optional<int> cardinality;
  if (block != nullptr) {
    const std::string path = "$.feasible_set";
    if (!block->is_object()) fail(path, "expected an object");
    check_known_keys(*block, path, {"lower", "upper", "cardinality"});
    auto binary_entries = [&](const json& j, const std::string& field) {
      Eigen::VectorXd v = get_sized_vector(j, path + "." + field, n, "one per binary");
      std::vector<int> out(n);
      for (int i = 0; i < n; ++i) {
        if (v[i] != 0.0 && v[i] != 1.0)
          fail(path + "." + field + "[" + std::to_string(i) + "]", "entries must be 0 or 1");
        out[i] = static_cast<int>(v[i]);
      }
      return out;
    };
    if (const json* j = optional_field(*block, "lower")) lower = binary_entries(*j, "lower");
    if (const json* j = optional_field(*block, "upper")) upper = binary_entries(*j, "upper");
    if (const json* j = optional_field(*block, "cardinality")) {
      cardinality = get_int(*j, path + ".cardinality");
      if (*cardinality < 0) fail(path + ".cardinality", "must be nonnegative");
    }
  }
  try {
    return FeasibleSet(std::move(lower), std::move(upper), cardinality);
  } catch (const std::invalid_argument& e) {
    fail("$.feasible_set", e.what());
  }
}

std::optional<Regularizer> parse_regularizer_block(const json* block) {
  if (block == nullptr) return std::nullopt;
  const std::string path = "$.regularizer";
  if (!block->is_object()) fail(path, "expected an object");
  const std::string kind = get_string(require(*block, path, "kind"), path + ".kind");
  try {
    if (kind == "bigM") {
      check_known_keys(*block, path, {"kind", "M"});
      return Regularizer::big_m(get_number(require(*block, path, "M"), path + ".M"));
    }
    if (kind == "ridge") {
      check_known_keys(*block, path, {"kind", "gamma"});
      return Regularizer::ridge(get_number(require(*block, path, "gamma"), path + ".gamma"));
    }
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  if (kind == "natural") {
    check_known_keys(*block, path, {"kind"});
    return std::nullopt;
  }
  fail(path + ".kind", "unknown regularizer kind \"" + kind + "\" (bigM, ridge, natural)");
}

// --- family payloads ---

using OracleFactory = std::function<std::unique_ptr<Oracle>(const Regularizer&)>;

struct FamilyPayload {
  OracleFactory make;
  bool maximize = false;
};

const std::vector<std::string> kCommonKeys = {"family", "feasible_set", "regularizer", "meta"};

std::vector<std::string> with_common(std::vector<std::string> keys) {
  keys.insert(keys.end(), kCommonKeys.begin(), kCommonKeys.end());
  return keys;
}

FamilyPayload parse_bqp_payload(const json& doc) {
  check_known_keys(doc, "$", with_common({"Q", "sense", "activation_cost"}));
  Eigen::MatrixXd q = get_matrix(require(doc, "$", "Q"), "$.Q");
  if (q.rows() != q.cols()) fail("$.Q", "expected a square matrix");
  if (q.rows() == 0) fail("$.Q", "expected at least one row");
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-9) fail("$.Q", "expected a symmetric matrix");
  bool maximize = false;
  if (const json* j = optional_field(doc, "sense")) {
    const std::string sense = get_string(*j, "$.sense");
    if (sense != "min" && sense != "max") fail("$.sense", "expected \"min\" or \"max\"");
    maximize = sense == "max";
  }
  BqpInstance instance{std::move(q), maximize};
  return {[instance](const Regularizer& reg) { return std::make_unique<BqpOracle>(instance, reg); },
          maximize};
}

FamilyPayload parse_erm_payload(const json& doc) {
  check_known_keys(doc, "$", with_common({"X", "y", "loss", "activation_cost"}));
  Eigen::MatrixXd x = get_matrix(require(doc, "$", "X"), "$.X");
  if (x.rows() == 0 || x.cols() == 0) fail("$.X", "expected at least one sample and one feature");
  Eigen::VectorXd y = get_sized_vector(require(doc, "$", "y"), "$.y", x.rows(), "one per sample");
  ErmInstance::Loss loss = ErmInstance::Loss::OLS;
  if (const json* j = optional_field(doc, "loss")) {
    const std::string name = get_string(*j, "$.loss");
    if (name == "ols")
      loss = ErmInstance::Loss::OLS;
    else if (name == "svm")
      loss = ErmInstance::Loss::SVM;
    else
      fail("$.loss", "expected \"ols\" or \"svm\"");
  }
  ErmInstance instance{std::move(x), std::move(y), loss};
  return {[instance](const Regularizer& reg) { return std::make_unique<ErmOracle>(instance, reg); }};
}

FamilyPayload parse_portfolio_payload(const json& doc) {
  check_known_keys(
      doc, "$",
      with_common({"mu", "Sigma", "risk_aversion", "A", "row_lower", "row_upper", "activation_cost"}));
  Eigen::VectorXd mu = get_vector(require(doc, "$", "mu"), "$.mu");
  if (mu.size() == 0) fail("$.mu", "expected at least one asset");
  Eigen::MatrixXd sigma = get_matrix(require(doc, "$", "Sigma"), "$.Sigma");
  if (sigma.rows() != mu.size() || sigma.cols() != mu.size())
    fail("$.Sigma", "expected a " + std::to_string(mu.size()) + "x" + std::to_string(mu.size()) +
                        " matrix (one row per asset)");
  double risk_aversion = 1.0;
  if (const json* j = optional_field(doc, "risk_aversion"))
    risk_aversion = get_number(*j, "$.risk_aversion");
  Eigen::MatrixXd a(0, mu.size());
  if (const json* j = optional_field(doc, "A")) {
    a = get_matrix(*j, "$.A");
    if (a.rows() > 0 && a.cols() != mu.size())
      fail("$.A", "expected " + std::to_string(mu.size()) + " columns (one per asset)");
  }
  Eigen::VectorXd row_lower = Eigen::VectorXd::Zero(a.rows());
  Eigen::VectorXd row_upper = Eigen::VectorXd::Zero(a.rows());
  if (const json* j = optional_field(doc, "row_lower"))
    row_lower = get_sized_vector(*j, "$.row_lower", a.rows(), "one per row of A");
  if (const json* j = optional_field(doc, "row_upper"))
    row_upper = get_sized_vector(*j, "$.row_upper", a.rows(), "one per row of A");
  PortfolioInstance instance{std::move(mu),      std::move(sigma),     risk_aversion,
                             std::move(a),       std::move(row_lower), std::move(row_upper)};
  return {[instance](const Regularizer& reg) {
    return std::make_unique<PortfolioOracle>(instance, reg);
  }};
}

FamilyPayload parse_uc_payload(const json& doc) {
  check_known_keys(doc, "$",
                   with_common({"quad_cost", "lin_cost", "max_output", "demand", "activation_cost"}));
  Eigen::VectorXd quad = get_vector(require(doc, "$", "quad_cost"), "$.quad_cost");
  if (quad.size() == 0) fail("$.quad_cost", "expected at least one generator");
  Eigen::VectorXd lin =
      get_sized_vector(require(doc, "$", "lin_cost"), "$.lin_cost", quad.size(), "one per generator");
  Eigen::VectorXd cap = get_sized_vector(require(doc, "$", "max_output"), "$.max_output",
                                         quad.size(), "one per generator");
  Eigen::VectorXd demand = get_vector(require(doc, "$", "demand"), "$.demand");
  if (demand.size() == 0) fail("$.demand", "expected at least one period");
  UnitCommitmentInstance instance{std::move(quad), std::move(lin), std::move(cap),
                                  std::move(demand)};
  return {[instance](const Regularizer& reg) {
    return std::make_unique<UnitCommitmentOracle>(instance, reg);
  }};
}

FamilyPayload parse_facility_payload(const json& doc) {
  check_known_keys(doc, "$", with_common({"open_cost", "transport", "capacity", "demand"}));
  Eigen::MatrixXd transport = get_matrix(require(doc, "$", "transport"), "$.transport");
  if (transport.rows() == 0 || transport.cols() == 0)
    fail("$.transport", "expected at least one facility and one customer");
  Eigen::VectorXd capacity = get_sized_vector(require(doc, "$", "capacity"), "$.capacity",
                                              transport.rows(), "one per facility");
  Eigen::VectorXd demand = get_sized_vector(require(doc, "$", "demand"), "$.demand",
                                            transport.cols(), "one per customer");
  Eigen::VectorXd open_cost = Eigen::VectorXd::Zero(transport.rows());
  if (const json* j = optional_field(doc, "open_cost"))
    open_cost = get_sized_vector(*j, "$.open_cost", transport.rows(), "one per facility");
  FacilityInstance instance{std::move(open_cost), std::move(transport), std::move(capacity),
                            std::move(demand)};
  return {[instance](const Regularizer& reg) {
    return std::make_unique<FacilityOracle>(instance, reg);
  }};
}

FamilyPayload parse_netdesign_payload(const json& doc) {
  check_known_keys(
      doc, "$", with_common({"num_nodes", "edges", "Q", "d", "u", "penalty", "b", "build_cost"}));
  const int num_nodes = get_int(require(doc, "$", "num_nodes"), "$.num_nodes");
  if (num_nodes < 2) fail("$.num_nodes", "expected at least two nodes");
  const json& edges_json = require(doc, "$", "edges");
  if (!edges_json.is_array()) fail("$.edges", "expected an array of [tail, head] pairs");
  std::vector<NetdesignInstance::Edge> edges;
  for (std::size_t e = 0; e < edges_json.size(); ++e) {
    const std::string path = "$.edges[" + std::to_string(e) + "]";
    const json& pair = edges_json[e];
    if (!pair.is_array() || pair.size() != 2) fail(path, "expected a [tail, head] pair");
    NetdesignInstance::Edge edge;
    edge.tail = get_int(pair[0], path + "[0]");
    edge.head = get_int(pair[1], path + "[1]");
    if (edge.tail < 0 || edge.tail >= num_nodes || edge.head < 0 || edge.head >= num_nodes)
      fail(path, "node index out of range [0, " + std::to_string(num_nodes - 1) + "]");
    edges.push_back(edge);
  }
  const Eigen::Index num_edges = static_cast<Eigen::Index>(edges.size());
  if (num_edges == 0) fail("$.edges", "expected at least one edge");
  Eigen::VectorXd d = get_sized_vector(require(doc, "$", "d"), "$.d", num_edges, "one per edge");
  Eigen::VectorXd u = get_sized_vector(require(doc, "$", "u"), "$.u", num_edges, "one per edge");
  Eigen::MatrixXd q = Eigen::MatrixXd(d.asDiagonal());
  if (const json* j = optional_field(doc, "Q")) {
    q = get_matrix(*j, "$.Q");
    if (q.rows() != num_edges || q.cols() != num_edges)
      fail("$.Q", "expected a " + std::to_string(num_edges) + "x" + std::to_string(num_edges) +
                      " matrix (one row per edge)");
  }
  double penalty = 0.0;
  if (const json* j = optional_field(doc, "penalty")) {
    penalty = get_number(*j, "$.penalty");
    if (penalty < 0.0) fail("$.penalty", "must be nonnegative");
  }
  Eigen::MatrixXd b = get_matrix(require(doc, "$", "b"), "$.b");
  if (b.rows() != num_nodes)
    fail("$.b", "expected " + std::to_string(num_nodes) + " rows (one per node)");
  if (b.cols() == 0) fail("$.b", "expected at least one commodity column");
  NetdesignInstance instance{num_nodes,        std::move(edges), std::move(q), std::move(d),
                             std::move(u),     penalty,          std::move(b)};
  return {[instance](const Regularizer& reg) {
    return std::make_unique<NetdesignOracle>(instance, reg);
  }};
}

FamilyPayload parse_family_payload(const std::string& family, const json& doc) {
  if (family == "bqp") return parse_bqp_payload(doc);
  if (family == "erm") return parse_erm_payload(doc);
  if (family == "portfolio") return parse_portfolio_payload(doc);
  if (family == "uc") return parse_uc_payload(doc);
  if (family == "facility") return parse_facility_payload(doc);
  if (family == "netdesign") return parse_netdesign_payload(doc);
  fail("$.family", "unknown family \"" + family +
                       "\" (netdesign, erm, portfolio, uc, facility, bqp)");
}

// --- whitespace-token formats (OR-Library, Biq-Mac) ---

struct Token {
  std::string text;
  int line = 1;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> tokens;
  int line = 1;
  std::string current;
  int current_line = 1;
  auto flush = [&]() {
    if (!current.empty()) {
      tokens.push_back({current, current_line});
      current.clear();
    }
  };
  for (char ch : text) {
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n' || ch == '\f' || ch == '\v') {
      flush();
      if (ch == '\n') ++line;
    } else {
      if (current.empty()) current_line = line;
      current.push_back(ch);
    }
  }
  flush();
  return tokens;
}

// Locale-independent numeric scanning over the token list, failing with the
// line of the offending (or missing) token and the name of what was expected.
class TokenStream {
 public:
  explicit TokenStream(const std::string& text) : tokens_(tokenize(text)) {}

  bool done() const { return pos_ == tokens_.size(); }

  const Token& peek() const { return tokens_[pos_]; }

  double next_double(const std::string& what) {
    const Token& token = take(what);
    double value = 0.0;
    const char* begin = token.text.data();
    const char* end = begin + token.text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
      fail(line_location(token.line),
           "expected " + what + ", got \"" + token.text + "\"");
    return value;
  }

  int next_int(const std::string& what) {
    const Token& token = take(what);
    int value = 0;
    const char* begin = token.text.data();
    const char* end = begin + token.text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
      fail(line_location(token.line),
           "expected " + what + " (an integer), got \"" + token.text + "\"");
    return value;
  }

  int last_line() const { return tokens_.empty() ? 1 : tokens_.back().line; }

  static std::string line_location(int line) { return "line " + std::to_string(line); }

 private:
  const Token& take(const std::string& what) {
    if (done()) fail(line_location(last_line()), "unexpected end of input: expected " + what);
    return tokens_[pos_++];
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

nlohmann::json json_vector(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

nlohmann::json json_matrix(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(json_vector(m.row(r).transpose()));
  return out;
}

ParsedInstance parse_instance(const std::string& text,
                              const std::optional<RegularizerChoice>& reg_override) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("line " + std::to_string(line_of_offset(text, e.byte)),
         "malformed JSON: " + strip_exception_prefix(e.what()));
  }
  if (!doc.is_object()) fail("$", "expected a JSON object");
  const std::string family = get_string(require(doc, "$", "family"), "$.family");
  FamilyPayload payload = parse_family_payload(family, doc);

  const std::optional<Regularizer> requested =
      reg_override ? reg_override->regularizer
                   : parse_regularizer_block(optional_field(doc, "regularizer"));
  auto build = [&](const Regularizer& reg) -> std::unique_ptr<Oracle> {
    try {
      return payload.make(reg);
    } catch (const std::invalid_argument& e) {
      fail("$", e.what());
    }
  };
  std::unique_ptr<Oracle> oracle;
  if (requested) {
    oracle = build(*requested);
  } else {
    // Resolve the natural regularizer by probing with a kind the family is
    // guaranteed to accept (BQP only takes big-M with M = 1, which is already
    // its natural choice; every other family accepts ridge).
    const Regularizer provisional =
        family == "bqp" ? Regularizer::big_m(1.0) : Regularizer::ridge(1.0);
    oracle = build(build(provisional)->natural_regularizer());
  }

  const int n = oracle->num_binaries();
  FeasibleSet feasible = build_feasible_set(optional_field(doc, "feasible_set"), n);

  const std::string cost_key = family == "facility"    ? "open_cost"
                               : family == "netdesign" ? "build_cost"
                                                       : "activation_cost";
  Eigen::VectorXd master_cost = Eigen::VectorXd::Zero(n);
  if (const json* j = optional_field(doc, cost_key))
    master_cost = get_sized_vector(*j, "$." + cost_key, n, "one per binary");

  return ParsedInstance{InstanceFile{std::move(doc)}, std::move(oracle), std::move(feasible),
                        std::move(master_cost), payload.maximize};
}

ParsedInstance parse_instance_file(const std::string& path,
                                   const std::optional<RegularizerChoice>& reg_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str(), reg_override);
}

std::string serialize_instance(const InstanceFile& file) { return file.doc.dump(2) + "\n"; }

InstanceFile parse_orlib_cap(const std::string& text, bool divide_by_demand) {
  TokenStream stream(text);
  if (stream.done()) fail("line 1", "empty input");
  const int num_facilities = stream.next_int("the warehouse count");
  const int num_customers = stream.next_int("the customer count");
  if (num_facilities <= 0) fail("line 1", "warehouse count must be positive");
  if (num_customers <= 0) fail("line 1", "customer count must be positive");

  Eigen::VectorXd capacity(num_facilities);
  Eigen::VectorXd open_cost(num_facilities);
  for (int i = 0; i < num_facilities; ++i) {
    const std::string which = "warehouse " + std::to_string(i + 1);
    capacity[i] = stream.next_double("the capacity of " + which);
    open_cost[i] = stream.next_double("the fixed cost of " + which);
  }
  Eigen::VectorXd demand(num_customers);
  Eigen::MatrixXd transport(num_facilities, num_customers);
  for (int j = 0; j < num_customers; ++j) {
    const std::string which = "customer " + std::to_string(j + 1);
    demand[j] = stream.next_double("the demand of " + which);
    for (int i = 0; i < num_facilities; ++i) {
      double cost = stream.next_double("the allocation cost of warehouse " +
                                       std::to_string(i + 1) + ", " + which);
      if (divide_by_demand && demand[j] > 0.0) cost /= demand[j];
      transport(i, j) = cost;
    }
  }
  if (!stream.done())
    fail(TokenStream::line_location(stream.peek().line),
         "unexpected trailing token \"" + stream.peek().text + "\"");

  json doc;
  doc["family"] = "facility";
  doc["open_cost"] = json_vector(open_cost);
  doc["capacity"] = json_vector(capacity);
  doc["demand"] = json_vector(demand);
  doc["transport"] = json_matrix(transport);
  return InstanceFile{std::move(doc)};
}

InstanceFile parse_biqmac(const std::string& text, std::vector<std::string>* warnings) {
  TokenStream stream(text);
  if (stream.done()) fail("line 1", "empty input");
  const int n = stream.next_int("the matrix dimension");
  if (n <= 0) fail("line 1", "matrix dimension must be positive");
  const int nnz = stream.next_int("the entry count");
  if (nnz < 0) fail("line 1", "entry count must be nonnegative");

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  std::set<std::pair<int, int>> seen;
  for (int t = 0; t < nnz; ++t) {
    const std::string which = "entry " + std::to_string(t + 1);
    const int entry_line = stream.done() ? stream.last_line() : stream.peek().line;
    const int i = stream.next_int("the row index of " + which);
    const int j = stream.next_int("the column index of " + which);
    const double value = stream.next_double("the value of " + which);
    if (i < 1 || i > n)
      fail(TokenStream::line_location(entry_line),
           "row index " + std::to_string(i) + " out of range [1, " + std::to_string(n) + "]");
    if (j < 1 || j > n)
      fail(TokenStream::line_location(entry_line),
           "column index " + std::to_string(j) + " out of range [1, " + std::to_string(n) + "]");
    const std::pair<int, int> key{std::min(i, j), std::max(i, j)};
    if (!seen.insert(key).second && warnings != nullptr)
      warnings->push_back(TokenStream::line_location(entry_line) + ": duplicate entry (" +
                          std::to_string(i) + ", " + std::to_string(j) +
                          ") overwrites the earlier value");
    q(i - 1, j - 1) = value;
    q(j - 1, i - 1) = value;
  }
  if (!stream.done())
    fail(TokenStream::line_location(stream.peek().line),
         "unexpected trailing token \"" + stream.peek().text + "\"");

  json doc;
  doc["family"] = "bqp";
  doc["Q"] = json_matrix(q);
  doc["sense"] = "max";
  return InstanceFile{std::move(doc)};
}

}  // namespace logicut
