#include "hessval/io_csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace hessval {

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ZetaProfile load_profile_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    std::string line;
    double support = -1.0;
    std::optional<std::pair<int, int>> klass;
    std::vector<double> s, v;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            // metadata: "# support=S, class=H_j^n"
            std::size_t pos = line.find("support=");
            if (pos != std::string::npos) support = std::stod(line.substr(pos + 8));
            pos = line.find("class=H_");
            if (pos != std::string::npos) {
                int j = 0, n = 0;
                if (std::sscanf(line.c_str() + pos, "class=H_%d^%d", &j, &n) == 2)
                    klass = std::make_pair(j, n);
            }
            continue;
        }
        if (line.rfind("s,", 0) == 0) continue;  // header
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b)) continue;
        s.push_back(std::stod(a));
        v.push_back(std::stod(b));
    }
    if (s.empty()) throw UsageError("profile csv: no samples in " + path);
    if (support <= 0.0) support = s.back();
    ZetaProfile z = ZetaProfile::from_samples(std::move(s), std::move(v), support);
    z.claimed_class = klass;
    return z;
}

void save_profile_csv(const ZetaProfile& z, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open " + path + " for writing");
    out << "# support=" << format_double(z.support_bound());
    if (z.claimed_class)
        out << ", class=H_" << z.claimed_class->first << "^" << z.claimed_class->second;
    out << "\n";
    out << "s,value\n";
    for (std::size_t i = 0; i < z.abscissae().size(); ++i)
        out << format_double(z.abscissae()[i]) << "," << format_double(z.values()[i]) << "\n";
}

}  // namespace hessval
