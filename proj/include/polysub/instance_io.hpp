// File formats of the command-line tool: problem instances as JSON
// documents and raw samples as CSV with an epoch label column.

#pragma once

#include <string>
#include <vector>

#include "polysub/cumulants.hpp"
#include "polysub/synth.hpp"

namespace polysub {

// Raised for malformed input files; plain I/O failures (unreadable or
// unwritable paths) raise IoError instead.
class FileFormatError : public std::runtime_error {
public:
    explicit FileFormatError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// JSON document {version, D, d, m, sigma, seed, covariances, means,
// true_basis?} with row-major flattened matrices. Round-trips all values
// bit-exactly.
void write_instance(const std::string& path, const ProblemInstance& instance);
ProblemInstance read_instance(const std::string& path);

// CSV "epoch,x1,...,xD"; epoch is a 1-based integer label; at least two
// rows per epoch. Returns one sample matrix per epoch, ordered by label.
std::vector<Eigen::MatrixXd> read_samples_csv(const std::string& path);

}  // namespace polysub
