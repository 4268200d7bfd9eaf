#include "chaosnet/map_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chaosnet {

BooleanMap read_map(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("map file: missing component count");
    long long n = 0;
    {
        std::istringstream header(line);
        if (!(header >> n)) throw std::invalid_argument("map file: bad component count line");
    }
    if (n < 1 || n > static_cast<long long>(kMaxComponents)) {
        throw std::invalid_argument("map file: component count " + std::to_string(n) +
                                    " outside [1, " + std::to_string(kMaxComponents) + "]");
    }
    const std::size_t states = std::size_t{1} << n;
    std::vector<std::uint32_t> table;
    table.reserve(states);
    long long value = 0;
    while (in >> value) {
        if (value < 0 || static_cast<unsigned long long>(value) >= states) {
            throw std::invalid_argument("map file: entry " + std::to_string(value) +
                                        " out of range");
        }
        table.push_back(static_cast<std::uint32_t>(value));
    }
    if (!in.eof()) throw std::invalid_argument("map file: non-numeric table entry");
    return BooleanMap(static_cast<unsigned>(n), std::move(table));
}

BooleanMap read_map_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open map file " + path.string());
    return read_map(in);
}

void write_map(std::ostream& out, const BooleanMap& f) {
    out << f.size() << '\n';
    const auto table = f.table();
    for (std::size_t v = 0; v < table.size(); ++v) {
        if (v) out << ' ';
        out << table[v];
    }
    out << '\n';
}

BooleanMap load_map(const std::string& name_or_path, unsigned default_n) {
    if (is_builtin_map_name(name_or_path)) return builtin_map(name_or_path, default_n);
    return read_map_file(name_or_path);
}

}  // namespace chaosnet
