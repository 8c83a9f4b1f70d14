/*
 Copyright 2026 The dfo Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "dfo/signal_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace dfo {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

Signal read_signal_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open signal file: " + path);

    std::string line;
    if (!std::getline(in, line))
        throw ConfigError(path + ": line 1: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);
    if (header.empty() || header[0] != "t")
        throw ConfigError(path + ": line 1: header must start with column 't'");
    const int sigma = static_cast<int>(header.size()) - 1;
    if (sigma < 1)
        throw ConfigError(path + ": line 1: header declares no coordinates");

    std::vector<Eigen::VectorXd> samples;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != sigma + 1)
            throw ConfigError(path + ": line " + std::to_string(line_no) +
                              ": expected " + std::to_string(sigma + 1) +
                              " fields, found " +
                              std::to_string(fields.size()));
        Eigen::VectorXd v(sigma);
        for (int i = 0; i < sigma; ++i) {
            try {
                size_t used = 0;
                v(i) = std::stod(fields[i + 1], &used);
                if (used != fields[i + 1].size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw ConfigError(path + ": line " + std::to_string(line_no) +
                                  ": cannot parse value '" + fields[i + 1] +
                                  "'");
            }
        }
        samples.push_back(std::move(v));
    }
    if (samples.empty()) throw ConfigError(path + ": no samples");

    Signal z(sigma, static_cast<long>(samples.size()));
    for (size_t k = 0; k < samples.size(); ++k)
        z.col(static_cast<long>(k)) = samples[k];
    return z;
}

void write_signal_csv(const std::string& path, const Signal& z) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write signal file: " + path);
    out << "t";
    for (long i = 0; i < z.rows(); ++i) out << ",z" << (i + 1);
    out << "\n";
    for (long k = 0; k < z.cols(); ++k) {
        out << k;
        for (long i = 0; i < z.rows(); ++i)
            out << "," << format_double(z(i, k));
        out << "\n";
    }
}

}  // namespace dfo
