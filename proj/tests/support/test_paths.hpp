#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>

inline std::filesystem::path test_data(const std::string& name) {
  const char* dir = std::getenv("EMACFEM_TEST_DATA");
  return std::filesystem::path(dir ? dir : "tests/data") / name;
}

inline std::filesystem::path mesh_data(const std::string& name) {
  const char* dir = std::getenv("EMACFEM_MESH_DIR");
  return std::filesystem::path(dir ? dir : "data/meshes") / name;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("emacfem_test_" + name);
  std::filesystem::create_directories(p);
  return p;
}
