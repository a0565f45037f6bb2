pub mod bar;
pub mod cdg;
pub mod descriptor;
pub mod graded;
pub mod hochschild;
pub mod koszul;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod rational;
pub mod report;
pub mod verify;
