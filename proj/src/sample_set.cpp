#include "wavediv/sample_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace wavediv {

double SampleSet::min() const {
    if (values.empty()) throw std::logic_error("empty sample set");
    return *std::min_element(values.begin(), values.end());
}

double SampleSet::max() const {
    if (values.empty()) throw std::logic_error("empty sample set");
    return *std::max_element(values.begin(), values.end());
}

SampleSet read_sample_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open sample file: " + path);
    }
    SampleSet s;
    s.label = path;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            // optional header
            std::string lower = line;
            std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
            if (lower == "value" || lower == "x") continue;
        }
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(line, &pos);
        } catch (const std::exception&) {
            throw std::runtime_error("bad numeric line in " + path + ": " + line);
        }
        if (!std::isfinite(v)) {
            throw std::runtime_error("non-finite sample in " + path + ": " + line);
        }
        s.values.push_back(v);
    }
    if (s.values.empty()) {
        throw std::runtime_error("sample file has no data: " + path);
    }
    return s;
}

void write_sample_csv(const std::string& path, const SampleSet& samples) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write sample file: " + path);
    }
    out << "value\n";
    char buf[40];
    for (double v : samples.values) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        out << buf;
    }
}

} // namespace wavediv
