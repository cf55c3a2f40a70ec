#include "sisctl/io.hpp"

#include "sisctl/core.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace sisctl {

std::string format_g17(double value)
{
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
    if (ec != std::errc{})
        throw Error(ErrorKind::IoFailure, "cannot format floating-point value");
    return std::string(buf.data(), end);
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::IoFailure, "cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec)
            throw Error(ErrorKind::IoFailure, "cannot create directory '" + path.parent_path().string() + "'");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorKind::IoFailure, "cannot open '" + path.string() + "' for writing");
    out << contents;
    if (!out)
        throw Error(ErrorKind::IoFailure, "write to '" + path.string() + "' failed");
}

}  // namespace sisctl
