mod cone;
mod graphs;
mod hyper;

use anyhow::Result;

use crate::report::Report;
use crate::settings::{Command, Settings};

pub fn run(command: Command, s: &Settings) -> Result<Report> {
    match command {
        Command::Perimeter => cone::perimeter_cmd(s),
        Command::DodVolume => cone::dod_volume_cmd(s),
        Command::Symdiff => cone::symdiff_cmd(s),
        Command::Polarize => cone::polarize_cmd(s),
        Command::Symmetrize => cone::symmetrize_cmd(s),
        Command::EqualPlane => cone::equal_plane_cmd(s),
        Command::Descent => cone::descent_cmd(s),
        Command::VerifyIsoperimetric => cone::verify_isoperimetric_cmd(s),
        Command::VerifyEuclid => cone::verify_euclid_cmd(s),
        Command::HypDod => hyper::hyp_dod_cmd(s),
        Command::VerifyHyperboloid => hyper::verify_hyperboloid_cmd(s),
        Command::VerifyAchronal => graphs::verify_achronal_cmd(s),
        Command::VerifyInfinity => graphs::verify_infinity_cmd(s),
        Command::VerifyHypDisk => graphs::verify_hyp_disk_cmd(s),
        Command::Convergence => cone::convergence_cmd(s),
    }
}
