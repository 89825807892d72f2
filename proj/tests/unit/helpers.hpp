#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "quanttm/project.hpp"

namespace quanttm::testing {

inline std::string fixture_path() { return std::string(QUANTTM_FIXTURE_DIR) + "/swiss-sme.json"; }

inline ProjectFile load_fixture() { return load_project(read_file(fixture_path())); }

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() / ("quanttm-test-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

  std::string copy_fixture(const std::string& name = "project.json") const {
    std::filesystem::copy_file(fixture_path(), path_ / name, std::filesystem::copy_options::overwrite_existing);
    return file(name);
  }

 private:
  std::filesystem::path path_;
};

}  // namespace quanttm::testing
