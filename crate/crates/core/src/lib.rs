pub mod exactfield;
pub mod trigroup;
pub mod salem;
pub mod conjdyn;
pub mod polyflow;
