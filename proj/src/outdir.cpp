#include "vidmetrics/output_dir.hpp"

#include <fstream>
#include <system_error>
#include <unistd.h>

#include "vidmetrics/digest.hpp"
#include "vidmetrics/model.hpp"

namespace vidmetrics::io {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, std::string_view content) {
    const fs::path tmp =
        path.parent_path() / ("." + path.filename().string() + ".tmp-" + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorKind::IoError, "cannot create " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out)
            throw Error(ErrorKind::IoError, "failed writing " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorKind::IoError, "cannot move output into place: " + path.string());
    }
}

OutputDir::OutputDir(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_))
        throw Error(ErrorKind::IoError, "cannot create output directory " + dir_.string());
}

void OutputDir::write(const std::string& name, std::string_view content) {
    write_atomic(dir_ / name, content);
    digests_[name] = sha256_hex(content);
}

}  // namespace vidmetrics::io
