#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "logicut/feasible_set.hpp"
#include "logicut/oracle.hpp"
#include "logicut/regularizer.hpp"

namespace logicut {

// Structured input error: `location` pins the offending spot ("line 3" for
// text formats, "$.feasible_set.lower[2]" for JSON fields), `what()` prefixes
// the message with it.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string location, const std::string& message)
      : std::runtime_error(location + ": " + message), location_(std::move(location)) {}

  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

// A validated instance document. The JSON layout is flat: the family tag and
// its payload fields sit at the top level, next to the optional "feasible_set"
// and "regularizer" blocks and a free-form "meta" object. Keys outside the
// family's schema are rejected at parse time.
struct InstanceFile {
  nlohmann::json doc;

  std::string family() const { return doc.at("family").get<std::string>(); }
};

// Everything the solver needs, assembled from one document: the retained
// file, the oracle (with its regularizer resolved), the feasible set, and the
// master-side activation cost c. `maximize` marks instances whose natural
// reading is a maximization (BQP with "sense": "max"); the oracle already
// minimizes the negated objective, so reports negate the value back.
struct ParsedInstance {
  InstanceFile file;
  std::unique_ptr<Oracle> oracle;
  FeasibleSet feasible;
  Eigen::VectorXd master_cost;
  bool maximize = false;
};

// A caller-side regularizer override: either a concrete regularizer or the
// family's natural choice (`regularizer` empty). Distinct from "no override"
// so the command line can force the natural regularizer over a file block.
struct RegularizerChoice {
  std::optional<Regularizer> regularizer;
};

// Parses and validates an instance document. An override (e.g. from the
// command line) replaces the file's regularizer block; otherwise the block is
// used, and when both are absent the family's natural regularizer applies.
// Throws ParseError on malformed input and dimension or validation failures.
ParsedInstance parse_instance(const std::string& text,
                              const std::optional<RegularizerChoice>& reg_override = std::nullopt);
ParsedInstance parse_instance_file(const std::string& path,
                                   const std::optional<RegularizerChoice>& reg_override = std::nullopt);

// Canonical serialization (two-space indent, keys sorted). Feeding the result
// back through parse_instance reproduces the same document.
std::string serialize_instance(const InstanceFile& file);

// Eigen-to-JSON helpers shared by the serializers and generators.
nlohmann::json json_vector(const Eigen::VectorXd& v);
nlohmann::json json_matrix(const Eigen::MatrixXd& m);

// OR-Library capacitated warehouse format: one record "m n", then m records
// "capacity fixed_cost", then for each customer its demand followed by the m
// allocation costs. Whitespace and line breaks are interchangeable. The
// allocation costs are stored as given; with `divide_by_demand` they are
// divided by the customer's demand first (the OR-Library files quote the cost
// of serving the whole demand, the oracle prices a unit).
InstanceFile parse_orlib_cap(const std::string& text, bool divide_by_demand = false);

// Biq-Mac sparse symmetric format: one record "n nnz", then nnz records
// "i j q" with 1-based indices; unlisted entries are zero and each record
// fills Q_ij and Q_ji. Duplicate entries overwrite (last wins) and append a
// note to `warnings` when provided. The sense is recorded as "max".
InstanceFile parse_biqmac(const std::string& text, std::vector<std::string>* warnings = nullptr);

}  // namespace logicut
