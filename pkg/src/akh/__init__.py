"""Annular Khovanov homology of link diagrams in the thickened annulus."""
