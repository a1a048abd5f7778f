pub mod catalog;
pub mod cli;
pub mod criterion;
pub mod fingrp;
pub mod laurent;
pub mod polymat;
pub mod presentation;
pub mod torus;
pub mod twisted;
