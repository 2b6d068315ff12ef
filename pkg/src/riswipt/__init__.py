"""RIS-aided downlink optimization: phase configuration, beamforming, and
time-switched joint information/energy delivery."""

__version__ = "0.1.0"
