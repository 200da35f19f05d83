#include "aict/trajectory_log.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace aict {
namespace {

void put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  out << buf;
}

void put_joints(std::ostream& out, const JointVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out << ',';
    put(out, v[i]);
  }
}

}  // namespace

void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out,
                          bool include_timing) {
  out << "t";
  const auto joint_cols = [&](const char* base) {
    for (int i = 1; i <= log.dofs; ++i) out << ',' << base << i;
  };
  joint_cols("q");
  joint_cols("qd");
  joint_cols("y_q");
  joint_cols("y_qd");
  joint_cols("mu");
  joint_cols("mu_p");
  joint_cols("mu_pp");
  joint_cols("u");
  out << ",F,setpoint,step_us\n";

  for (const LogRow& row : log.rows) {
    put(out, row.t);
    put_joints(out, row.q);
    put_joints(out, row.qd);
    put_joints(out, row.y_q);
    put_joints(out, row.y_qd);
    put_joints(out, row.mu);
    put_joints(out, row.mu_p);
    put_joints(out, row.mu_pp);
    put_joints(out, row.u);
    out << ',';
    put(out, row.free_energy);
    out << ',' << row.setpoint_id << ',';
    put(out, include_timing ? row.step_us : 0.0);
    out << '\n';
  }
}

void write_trajectory_csv(const TrajectoryLog& log, const std::string& path,
                          bool include_timing) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_trajectory_csv(log, out, include_timing);
  if (!out.good()) throw Error("failed writing " + path);
}

}  // namespace aict
