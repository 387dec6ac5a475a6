#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gsc {

/// Invalid input or contract violation. The CLI maps these to exit code 2.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine failed to meet its tolerance. CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public ValidationError {
public:
  ParseError(std::size_t line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class DuplicateIdError : public ValidationError {
public:
  explicit DuplicateIdError(const std::string& id)
      : ValidationError("duplicate document id \"" + id + "\""), id_(id) {}
  const std::string& id() const { return id_; }

private:
  std::string id_;
};

class TooFewDocumentsError : public ValidationError {
public:
  explicit TooFewDocumentsError(std::size_t n)
      : ValidationError("corpus needs at least 2 documents, got " +
                        std::to_string(n)) {}
};

class EmptyDocumentError : public ValidationError {
public:
  explicit EmptyDocumentError(const std::string& id)
      : ValidationError("document \"" + id +
                        "\" has no tokens after filtering"),
        id_(id) {}
  const std::string& id() const { return id_; }

private:
  std::string id_;
};

class IsolatedDocumentError : public ValidationError {
public:
  explicit IsolatedDocumentError(std::int64_t doc)
      : ValidationError("document " + std::to_string(doc) +
                        " has zero degree (isolated node)"),
        doc_(doc) {}
  std::int64_t doc() const { return doc_; }

private:
  std::int64_t doc_;
};

class ZeroVectorError : public ValidationError {
public:
  explicit ZeroVectorError(std::int64_t row)
      : ValidationError("row " + std::to_string(row) +
                        " has zero norm and cannot be normalized"),
        row_(row) {}
  std::int64_t row() const { return row_; }

private:
  std::int64_t row_;
};

/// memb(i, C_j) is undefined for singleton clusters (division by n_j - 1).
class SingletonClusterError : public ValidationError {
public:
  explicit SingletonClusterError(int cluster)
      : ValidationError("cluster " + std::to_string(cluster) +
                        " is a singleton; membership score undefined") {}
};

} // namespace gsc
