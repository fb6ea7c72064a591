#include "kaclab/records.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <tuple>

#include "kaclab/format.hpp"

namespace kaclab {

namespace {

void put_field(std::ostream& os, const std::string& f)
{
    if (f.find_first_of(",\"\n") == std::string::npos) {
        os << f;
        return;
    }
    os << '"';
    for (char ch : f) {
        if (ch == '"')
            os << '"';
        os << ch;
    }
    os << '"';
}

std::vector<std::string> split_row(const std::string& line, long lineno)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else
                    quoted = false;
            } else
                cur += ch;
        } else if (ch == '"')
            quoted = true;
        else if (ch == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else
            cur += ch;
    }
    if (quoted)
        throw std::runtime_error("records line " + std::to_string(lineno) + ": unterminated quote");
    out.push_back(std::move(cur));
    return out;
}

template <class T>
T number(const std::string& s, long lineno)
{
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw std::runtime_error("records line " + std::to_string(lineno) + ": bad number '" + s + "'");
    return v;
}

double real(const std::string& s, long lineno)
{
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    return number<double>(s, lineno);
}

}  // namespace

void sort_records(std::vector<TrialRecord>& records)
{
    auto key = [](const TrialRecord& r) {
        return std::tie(r.n, r.trial, r.observable, r.experiment, r.law, r.value, r.aux1, r.aux2);
    };
    std::sort(records.begin(), records.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
}

void write_records(std::ostream& os, std::vector<TrialRecord> records)
{
    sort_records(records);
    os << record_header << '\n';
    for (const auto& r : records) {
        put_field(os, r.experiment);
        os << ',';
        put_field(os, r.law);
        os << ',' << r.n << ',' << r.trial << ',';
        put_field(os, r.observable);
        os << ',' << format_double(r.value) << ',' << format_double(r.aux1) << ',' << format_double(r.aux2) << '\n';
    }
}

void write_records(const std::string& path, std::vector<TrialRecord> records)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw std::runtime_error("cannot write '" + tmp + "'");
        write_records(os, std::move(records));
        os.flush();
        if (!os)
            throw std::runtime_error("write failed for '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::vector<TrialRecord> read_records(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line != record_header)
        throw std::runtime_error("records: missing or unexpected header");
    std::vector<TrialRecord> out;
    long lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty())
            continue;
        const auto f = split_row(line, lineno);
        if (f.size() != 8)
            throw std::runtime_error("records line " + std::to_string(lineno) + ": expected 8 fields");
        out.push_back({f[0], f[1], number<long>(f[2], lineno), number<long>(f[3], lineno), f[4],
                       real(f[5], lineno), real(f[6], lineno), real(f[7], lineno)});
    }
    return out;
}

std::vector<TrialRecord> read_records(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open '" + path + "'");
    return read_records(is);
}

}  // namespace kaclab
