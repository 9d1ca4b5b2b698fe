# seqcert
