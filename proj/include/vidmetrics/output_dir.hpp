#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace vidmetrics::io {

/// Writes a file by renaming a fully written temporary sibling over it.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Output directory for one command. Files become visible one at a time via
/// atomic rename; the manifest is written last.
class OutputDir {
public:
    explicit OutputDir(std::filesystem::path dir);

    void write(const std::string& name, std::string_view content);

    const std::filesystem::path& path() const noexcept { return dir_; }
    /// name -> SHA-256 of everything written so far.
    const std::map<std::string, std::string>& digests() const noexcept { return digests_; }

private:
    std::filesystem::path dir_;
    std::map<std::string, std::string> digests_;
};

}  // namespace vidmetrics::io
