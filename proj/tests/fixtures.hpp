#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "sauce/corpus.hpp"

namespace sauce::testing {

// D1={a,b,c} D2={a,b,d} D3={a,c,e} D4={a,f}
// dc: a=4 b=2 c=2 d=1 e=1 f=1; canonical ids a=0 b=1 c=2 d=3 e=4 f=5.
inline std::vector<Document> four_docs() {
  return {make_document("D1", "a b c"), make_document("D2", "a b d"),
          make_document("D3", "a c e"), make_document("D4", "a f")};
}

// Fresh scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("sauce-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace sauce::testing
