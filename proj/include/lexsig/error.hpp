#pragma once

#include <stdexcept>
#include <string>

namespace lexsig {

// Error kinds map one-to-one onto process exit codes: usage=1, data=2, capacity=3.
class Error : public std::runtime_error {
public:
  enum class Kind { usage = 1, data = 2, capacity = 3 };

  Error(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
  Kind kind_;
};

class UsageError : public Error {
public:
  explicit UsageError(const std::string& msg) : Error(Kind::usage, msg) {}
};

class DataError : public Error {
public:
  explicit DataError(const std::string& msg) : Error(Kind::data, msg) {}
};

class CapacityError : public Error {
public:
  explicit CapacityError(const std::string& msg) : Error(Kind::capacity, msg) {}
};

// A published probability table does not cover the requested cell.
class TableMissError : public DataError {
public:
  explicit TableMissError(const std::string& msg) : DataError(msg) {}
};

}  // namespace lexsig
