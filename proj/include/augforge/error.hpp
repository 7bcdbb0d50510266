#pragma once

#include <stdexcept>
#include <string>

namespace augforge {

/// Base class for every error raised by the library. The category maps onto
/// the CLI exit codes (1 config, 2 I/O, 3 data/format).
class Error : public std::runtime_error {
 public:
  enum class Category { kConfig = 1, kIo = 2, kData = 3 };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }
  int exit_code() const noexcept { return static_cast<int>(category_); }

 private:
  Category category_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(Category::kConfig, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(Category::kIo, what) {}
};

/// Malformed file contents (bad magic, truncated header, ragged CSV).
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what)
      : Error(Category::kData, what) {}
};

/// Well-formed file using an encoding we do not read.
class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what)
      : Error(Category::kData, what) {}
};

class BoundsError : public Error {
 public:
  explicit BoundsError(const std::string& what)
      : Error(Category::kData, what) {}
};

/// Shape or label mismatch between operands, empty inputs, etc.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(Category::kData, what) {}
};

}  // namespace augforge
