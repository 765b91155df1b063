#pragma once

// Shared test fixtures: paths to the shipped bundles and scratch-directory
// helpers for building broken variants.

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace testsupport {

namespace fs = std::filesystem;

inline fs::path repo_dir() { return fs::path(EA_REPO_DIR); }

inline fs::path credit_bundle() {
    return repo_dir() / "bundles" / "credit-card-mini";
}

inline fs::path school_bundle() {
    return repo_dir() / "bundles" / "school-allocation-mini";
}

inline std::string read_file(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

inline void write_file(const fs::path& file, const std::string& content) {
    fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    out << content;
}

/// A unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::mt19937_64 rng(std::random_device{}());
        path_ = fs::temp_directory_path() /
                ("ea-test-" + tag + "-" + std::to_string(rng()));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

/// Copies a bundle into the scratch directory so a test can break it.
inline fs::path copy_bundle(const TempDir& dir, const fs::path& source) {
    fs::path target = dir.path() / source.filename();
    fs::copy(source, target, fs::copy_options::recursive);
    return target;
}

inline std::string credit_sample_csv() {
    return read_file(credit_bundle() / "sample" / "decision-1.csv");
}

} // namespace testsupport
