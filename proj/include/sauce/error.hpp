#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sauce {

/// Bad user input: malformed files, duplicate ids, missing method inputs.
/// The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure to decode a binary artifact (index, sidecar, vector store).
class LoadError : public InputError {
 public:
  enum class Kind { kBadMagic, kUnsupportedVersion, kTruncated, kCorrupt, kIo };

  LoadError(Kind kind, std::uint64_t offset, const std::string& what)
      : InputError(what + " (at byte " + std::to_string(offset) + ")"),
        kind_(kind),
        offset_(offset) {}

  Kind kind() const noexcept { return kind_; }
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  Kind kind_;
  std::uint64_t offset_;
};

}  // namespace sauce
