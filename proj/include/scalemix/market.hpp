#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace scalemix {

// Malformed or out-of-domain input data (as opposed to bad usage).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PriceSeries {
    std::vector<std::string> dates;  // empty when the file has no date column
    std::vector<double> prices;
};

// column is a header name or a 1-based column index. Dates are taken from a
// column named "date" when present.
PriceSeries ingest(std::istream& in, const std::string& column = "close");
PriceSeries ingest_file(const std::string& path, const std::string& column = "close");

// A numeric column with finite values >= 0 (volatility or transformed series).
std::vector<double> read_series_column(const std::string& path, const std::string& column);

struct Volatility {
    std::vector<double> returns;  // log(P_{i+1} / P_i)
    std::vector<double> squared;
};

Volatility to_volatility(const std::vector<double>& prices);

}  // namespace scalemix
