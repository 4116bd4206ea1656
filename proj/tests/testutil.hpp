#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

// Relative comparison that stays meaningful for values far from 1.
inline bool close_rel(double value, double reference, double rel_tol) {
    if (reference == 0.0) {
        return std::abs(value) <= rel_tol;
    }
    return std::abs(value - reference) <= rel_tol * std::abs(reference);
}

inline bool close_abs(double value, double reference, double abs_tol) {
    return std::abs(value - reference) <= abs_tol;
}

// Fresh scratch directory under the system temp dir, removed on destruction.
class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path();
        for (int attempt = 0; attempt < 1000; ++attempt) {
            auto candidate = base / (tag + "-" + std::to_string(std::rand()) + "-" +
                                     std::to_string(attempt));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("could not create scratch directory");
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};
