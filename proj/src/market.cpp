#include "scalemix/market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "scalemix/sample_path.hpp"

namespace scalemix {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        std::size_t b = 0;
        while (b < cell.size() && cell[b] == ' ') ++b;
        out.push_back(cell.substr(b));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

PriceSeries parse_column(std::istream& in, const std::string& column, bool prices) {
    std::string line;
    if (!std::getline(in, line) || split(line).empty()) throw DataError("price file is empty");
    const auto header = split(line);
    std::size_t col = header.size();
    if (!column.empty() && std::all_of(column.begin(), column.end(), [](unsigned char c) { return std::isdigit(c); })) {
        const auto idx = std::stoul(column);
        if (idx < 1 || idx > header.size()) throw DataError("price column index " + column + " out of range");
        col = idx - 1;
    } else {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (lower(header[i]) == lower(column)) col = i;
        if (col == header.size()) throw DataError("price column '" + column + "' not found in header");
    }
    std::size_t date_col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i)
        if (lower(header[i]) == "date") date_col = i;

    PriceSeries s;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line);
        if (col >= cells.size()) throw DataError("line " + std::to_string(lineno) + ": missing price column");
        double p = 0.0;
        try {
            p = parse_double(cells[col]);
        } catch (const std::exception&) {
            throw DataError("line " + std::to_string(lineno) + ": non-numeric price '" + cells[col] + "'");
        }
        if (prices && (!(p > 0.0) || !std::isfinite(p)))
            throw DataError("line " + std::to_string(lineno) + ": price must be positive");
        if (!prices && (!(p >= 0.0) || !std::isfinite(p)))
            throw DataError("line " + std::to_string(lineno) + ": value must be finite and >= 0");
        s.prices.push_back(p);
        if (date_col < cells.size()) s.dates.push_back(cells[date_col]);
    }
    if (s.prices.empty()) throw DataError("price file has no data rows");
    return s;
}

}  // namespace

PriceSeries ingest(std::istream& in, const std::string& column) { return parse_column(in, column, true); }

PriceSeries ingest_file(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return ingest(in, column);
}

std::vector<double> read_series_column(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return parse_column(in, column, false).prices;
}

Volatility to_volatility(const std::vector<double>& prices) {
    if (prices.size() < 2) throw DataError("need at least 2 prices");
    Volatility v;
    for (double p : prices)
        if (!(p > 0.0)) throw DataError("prices must be positive");
    for (std::size_t i = 0; i + 1 < prices.size(); ++i) {
        const double r = std::log(prices[i + 1] / prices[i]);
        v.returns.push_back(r);
        v.squared.push_back(r * r);
    }
    return v;
}

}  // namespace scalemix
