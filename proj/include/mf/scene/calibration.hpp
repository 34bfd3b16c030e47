#pragma once

#include "mf/geom/pose.hpp"
#include "mf/scene/kinematics.hpp"

namespace mf::scene {

/// Express an object tracked by the helmet camera in the robot TCP frame:
/// T_object^tcp = tcp_from_hc * object_in_hc.
Posed objectInTcp(const Posed& object_in_hc, const Posed& tcp_from_hc);

/// Relative pose between an object seen by a wall-mounted camera (mako) and an
/// object seen by the helmet camera, chained through the robot:
/// T_object2^object1 = inverse(object1_in_mako) * mako_from_base
///                   * base_from_tcp * tcp_from_hc * object2_in_hc.
Posed relativeObjects(const Posed& object1_in_mako, const Posed& mako_from_base,
                      const Posed& base_from_tcp, const Posed& tcp_from_hc,
                      const Posed& object2_in_hc);

/// Same chain with the kinematics sampled at time t.
Posed relativeObjects(const Posed& object1_in_mako, const Posed& mako_from_base,
                      const KinematicsStream& kinematics, double t, const Posed& tcp_from_hc,
                      const Posed& object2_in_hc);

}  // namespace mf::scene
