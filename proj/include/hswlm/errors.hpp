#ifndef HSWLM_ERRORS_HPP
#define HSWLM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hswlm {

// Base class for all library errors. The CLI maps subclasses to exit codes:
// ParseError -> 2, EstimationError -> 3, EvalError -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: hierarchy files, document records, model files.
class ParseError : public Error {
 public:
  enum class Kind {
    DuplicateId,
    MultipleRoots,
    NoRoot,
    Cycle,
    DanglingParent,
    UnknownEntity,
    NotALeaf,
    DuplicateDoc,
    BadRecord,
  };

  ParseError(Kind kind, std::string id, const std::string& what)
      : Error(what), kind_(kind), id_(std::move(id)) {}

  Kind kind() const { return kind_; }
  // The offending entity/document id, when one exists.
  const std::string& id() const { return id_; }

 private:
  Kind kind_;
  std::string id_;
};

// Failures while estimating models: empty pooled counts, models pruned to
// nothing, background combinations with no usable mass.
class EstimationError : public Error {
 public:
  enum class Kind {
    EmptyModel,
    AllPruned,
    DegenerateBackground,
  };

  EstimationError(Kind kind, std::string entity, const std::string& what)
      : Error(what), kind_(kind), entity_(std::move(entity)) {}

  Kind kind() const { return kind_; }
  const std::string& entity() const { return entity_; }

 private:
  Kind kind_;
  std::string entity_;
};

// Failures in the evaluation toolkit: degenerate training sets, label
// mismatches, empty scheme resources.
class EvalError : public Error {
 public:
  using Error::Error;
};

}  // namespace hswlm

#endif  // HSWLM_ERRORS_HPP
