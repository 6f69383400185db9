#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dimer/fockspace.hpp"

namespace dimer {

enum class Method { semiclassical, gaussian, fock };
enum class BranchPolicy { automatic, symmetric, broken_plus };

Method method_from_string(const std::string& s);
BranchPolicy branch_policy_from_string(const std::string& s);

struct ScanConfig {
    Method method = Method::semiclassical;
    double uf_min = 0.2;
    double uf_max = 4.0;
    int steps = 200;
    double J = 2.5, delta = -1.5, gamma = 1.0, U = 1.0;
    int cutoff = 10;
    double tol_kernel = 1e-8;
    BranchPolicy branch = BranchPolicy::automatic;
    std::string format = "csv";  // csv | json-lines
    int threads = 1;

    void validate() const;
    std::vector<double> grid() const;
};

// One output row; values keyed by column name, columns fixed per method.
struct ScanRecord {
    int index = 0;
    std::map<std::string, double> values;
    std::string branch;  // semiclassical / gaussian rows
    std::string error;
};

struct ScanResult {
    ScanConfig config;
    std::vector<std::string> columns;
    std::vector<ScanRecord> records;
};

// Run the configured scan.  Gaussian and Fock grids are dispatched to a
// worker pool of config.threads; records are ordered by grid index, so the
// output is byte-deterministic regardless of scheduling.  Per-point solver
// failures land in the record's error field and the scan continues.
ScanResult run_scan(const ScanConfig& config);

// Serialize with '#'-prefixed metadata (schema=1 and the full parameter set)
// and 12-significant-digit numbers; format csv or json-lines.
void write_scan(const ScanResult& result, std::ostream& os);

// Format a double with 12 significant digits (shared by all writers).
std::string format_g12(double v);

struct FitReport {
    FitResult fit;
    std::string observable;  // order | variance
    std::string side;        // lower | upper
    double threshold_guess = 0.0;  // transition located from the scan data
    double window_lo = 0.0, window_hi = 0.0;
    int n_used = 0;
};

// Read back a scan file, locate the requested stability transition from the
// branch/error columns, select the default fit window (distance to threshold
// in (1e-4, 1e-1) on the power-law side) and fit (order parameter: exponent
// +1/2 expected; variance: -1).  The threshold itself is refitted (fit.A_c).
FitReport run_fit(const std::string& scan_path, const std::string& observable,
                  const std::string& side);

std::string format_fit_report(const FitReport& r);

// Single-point report across whichever tier is requested.
std::string run_point(const DimerParams& p, Method method, int cutoff,
                      double tol_kernel = 1e-8);

}  // namespace dimer
