#pragma once

#include "gsq/asymptotics.hpp"
#include "gsq/queue.hpp"
#include "gsq/sampling.hpp"

#include <string>

namespace gsq {

/// Shortest string with 17 significant digits ("%.17g").
std::string format_g17(double x);

/// CSV dump `t,x` in fixed scientific notation, 17 significant digits.
std::string path_csv(const SampledPath& path);
void write_path_csv(const SampledPath& path, const std::string& file);

/// Binary dump: magic "GSP1", then little-endian u64 count, f64 origin,
/// f64 step, f64 values.
void write_path_binary(const SampledPath& path, const std::string& file);
SampledPath read_path_binary(const std::string& file);

/// CSV dump `t,q`.
std::string queue_csv(const QueuePath& queue);
void write_queue_csv(const QueuePath& queue, const std::string& file);

/// {boundary, checkpoints:[{t, xi, crossed}]}
std::string crossing_record_json(const CrossingRecord& record);

/// Flat JSON of the constants bundle; numbers at 17 significant digits.
std::string constants_json(const AsymptoticConstants& k);

/// Write-to-temp-then-rename; single writer per destination.
void atomic_write(const std::string& file, const std::string& content);

std::string read_file(const std::string& file);
bool file_exists(const std::string& file);

} // namespace gsq
