pub mod oracle_suite;
