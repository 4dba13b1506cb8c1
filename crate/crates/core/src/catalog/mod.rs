//! Concrete structures: group and function bialgebras of finite abelian
//! groups, the anyonic family, and the `U_h(sl_2)` module model.

pub mod groups;
pub mod uhsl2;

pub use groups::{
    anyonic_qt, anyonic_twisted, bicharacter_r, check_bicharacter, check_group_r,
    cyclic_power_endo, exp_bicharacter, function_bialgebra, group_bialgebra, ClassicalQT,
    FiniteAbelianGroup, GroupMorphism,
};
pub use uhsl2::{
    uhsl2_generator_alpha_images, uhsl2_r_operator, vn_action, vn_alpha, Uhsl2Model, VnAction,
};
